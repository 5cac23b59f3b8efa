"""L x L lattice with domain-wall boundaries and its exact partition function.

Horizontal lines carry rapidities ``x[0..L-1]`` (bottom to top), vertical
lines ``y[0..L-1]`` (left to right); the vertex in row ``i``, column ``j`` has
weight ``w(-x[i] + y[j])``.  Colour 1 sits on the left and top boundary
bonds, colour n on the right and bottom ones.
"""

from __future__ import annotations

import cmath
import os
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .model import ModelParams, structure, w1, w3, w_cplus, weight_tensor

DEFAULT_BUDGET = 10**6
CORNER_TOL = 1e-9


def state_budget() -> int:
    env = os.environ.get("DWSOLVE_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class Rapidities:
    x: tuple
    y: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same length")
        if len(self.x) < 1:
            raise ValueError("need L >= 1")

    @property
    def L(self) -> int:
        return len(self.x)

    @classmethod
    def random(cls, L: int, rng, low: float = 0.1, high: float = 0.9) -> "Rapidities":
        return cls(tuple(rng.uniform(low, high, L)), tuple(rng.uniform(low, high, L)))

    def u(self, i: int, j: int):
        return -self.x[i] + self.y[j]

    def replace(self, *, x=None, y=None) -> "Rapidities":
        return Rapidities(self.x if x is None else x, self.y if y is None else y)

    def permuted(self, px=None, py=None) -> "Rapidities":
        x = self.x if px is None else tuple(self.x[p] for p in px)
        y = self.y if py is None else tuple(self.y[p] for p in py)
        return Rapidities(x, y)

    def drop(self, i: int, j: int) -> "Rapidities | None":
        """Remove ``x[i]`` and ``y[j]``; ``None`` for the empty lattice."""
        if self.L == 1:
            return None
        x = self.x[:i] + self.x[i + 1 :]
        y = self.y[:j] + self.y[j + 1 :]
        return Rapidities(x, y)


def _check_budget(n: int, L: int, budget: int | None):
    budget = state_budget() if budget is None else budget
    if n**L > budget:
        raise BudgetExceeded(f"n**L = {n}**{L} = {n**L} exceeds the state budget {budget}")


def _transfer(rap: Rapidities, params: ModelParams, weights) -> complex:
    n, L = params.n, rap.L
    # psi[c_1, ..., c_L]: vertical bond colours (0-based) below the current row
    psi = np.zeros((n,) * L, dtype=complex)
    psi[(n - 1,) * L] = 1.0
    for i in range(L):
        phi = np.zeros((n,) + psi.shape, dtype=complex)
        phi[0] = psi  # colour 1 enters from the left
        for j in range(L):
            W = weights(rap.u(i, j))
            ax = j + 1
            phi = np.moveaxis(phi, ax, 1)
            # W[rho, sigma, mu, nu] phi[rho, mu, ...] -> phi'[sigma, nu, ...]
            phi = np.tensordot(W, phi, axes=([0, 2], [0, 1]))
            phi = np.moveaxis(phi, 1, ax)
        psi = phi[n - 1]  # colour n leaves on the right
    return complex(psi[(0,) * L])


def z_bruteforce(rap: Rapidities, params: ModelParams, budget: int | None = None) -> complex:
    """Exact DW partition function by a row-to-row colour transfer matrix.

    Rows are processed bottom to top and vertices left to right; the state is
    the tuple of L vertical bond colours, stored as a dense ``n**L`` array.
    """
    _check_budget(params.n, rap.L, budget)
    return _transfer(rap, params, lambda u: weight_tensor(u, params))


def z_bruteforce_scale(rap: Rapidities, params: ModelParams, budget: int | None = None) -> float:
    """``sum over configurations of |product of weights|``: the magnitude scale of the sum."""
    _check_budget(params.n, rap.L, budget)
    return _transfer(rap, params, lambda u: np.abs(weight_tensor(u, params))).real


def enumerate_configurations(rap: Rapidities, params: ModelParams):
    """Yield ``(vertices, weight)`` for every DW configuration with nonzero structure.

    ``vertices[i][j]`` is the ``(rho, sigma, mu, nu)`` tuple at row ``i``,
    column ``j``.  Plain depth-first search over admissible vertices; meant
    as an independent check of :func:`z_bruteforce` on small lattices.
    """
    n, L = params.n, rap.L
    by_in = {}
    for st, *_ in structure(n):
        by_in.setdefault((st.rho, st.mu), []).append(st)
    tensors = [[weight_tensor(rap.u(i, j), params) for j in range(L)] for i in range(L)]

    def rows(i, below, acc, w):
        if i == L:
            if all(c == 1 for c in below):
                yield [list(r) for r in acc], w
            return
        for row, top, wr in row_fill(i, 0, 1, below, [], [], 1.0):
            if row[-1].sigma != n:
                continue
            acc.append(row)
            yield from rows(i + 1, top, acc, w * wr)
            acc.pop()

    def row_fill(i, j, h, below, row, top, w):
        if j == L:
            yield list(row), tuple(top), w
            return
        for st in by_in.get((h, below[j]), ()):
            wt = tensors[i][j][st.rho - 1, st.sigma - 1, st.mu - 1, st.nu - 1]
            row.append(st)
            top.append(st.nu)
            yield from row_fill(i, j + 1, st.sigma, below, row, top, w * wt)
            row.pop()
            top.pop()

    yield from rows(0, (n,) * L, [], 1.0)


def _specialized(expr, ref, tol=CORNER_TOL) -> bool:
    return abs(expr) < tol * (1 + abs(ref))


def z_bruteforce_corner_left(rap: Rapidities, params: ModelParams):
    """Frozen-corner factor when ``-x_L + y_1 + n - 2 = 0``.

    Returns ``(prefactor, reduced)`` with ``Z_L = prefactor * Z_{L-1}(reduced)``;
    ``reduced`` is ``None`` when L = 1 (empty lattice, Z = 1).
    """
    n, L = params.n, rap.L
    xL, y1 = rap.x[-1], rap.y[0]
    if not _specialized(-xL + y1 + n - 2, xL):
        raise PreconditionError("left corner needs -x_L + y_1 + n - 2 = 0")
    pref = w_cplus(-xL + y1, params)
    for i in range(L - 1):
        pref *= w3(-rap.x[i] + y1, params)
    for j in range(1, L):
        pref *= w3(-xL + rap.y[j], params)
    return pref, rap.drop(L - 1, 0)


def z_bruteforce_corner_right(rap: Rapidities, params: ModelParams):
    """Frozen-corner factor when ``-x_L + y_L = 0``; same return convention as the left corner."""
    L = rap.L
    xL, yL = rap.x[-1], rap.y[-1]
    if not _specialized(-xL + yL, xL):
        raise PreconditionError("right corner needs -x_L + y_L = 0")
    pref = w_cplus(-xL + yL, params)
    for j in range(L - 1):
        pref *= w1(-xL + rap.y[j], params)
    for i in range(L - 1):
        pref *= w1(-rap.x[i] + yL, params)
    return pref, rap.drop(L - 1, L - 1)


def rapidity_from_t(t, params: ModelParams) -> complex:
    """Additive rapidity whose multiplicative variable ``k**x`` equals ``t**2``."""
    return 1j * cmath.log(t) / params.lam


def z_multiplicative_slice(rap: Rapidities, which, t, params: ModelParams, evaluator=None) -> complex:
    """Partition function as a function of ``t = X**(1/2)`` for one rapidity.

    ``which`` is ``("x", i)`` or ``("y", j)``.  The selected rapidity is set
    to ``i log(t) / lam``.  Every weight is a Laurent polynomial in
    ``exp(i lam u)``, so the result does not depend on the branch of the
    logarithm.  ``evaluator`` defaults to :func:`z_bruteforce`.
    """
    kind, idx = which
    r = rapidity_from_t(t, params)
    if kind == "x":
        x = list(rap.x)
        x[idx] = r
        new = rap.replace(x=x)
    elif kind == "y":
        y = list(rap.y)
        y[idx] = r
        new = rap.replace(y=y)
    else:
        raise ValueError(f"unknown rapidity kind {kind!r}")
    return (evaluator or z_bruteforce)(new, params)
