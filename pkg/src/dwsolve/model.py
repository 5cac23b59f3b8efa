"""Level-1 affine so(n) vertex weights and the quantum R-matrix.

A vertex is labelled by the colours ``(rho, sigma, mu, nu)``: ``rho`` enters
from the left, ``sigma`` leaves to the right, ``mu`` enters from below and
``nu`` leaves through the top.  It carries a weight only if
``rho + mu == sigma + nu``.

Weights are listed by family w1..w8.  Two choices fix the conventions
used throughout the package:

* w8 uses the phase ``exp(i lam (2 bar(beta) - 2 bar(alpha) + n - 2))``
  (multiplicatively ``k**(bar(alpha) - bar(beta))``).  With the ``- n + 2``
  phase of w7 copied over, the R-matrix violates Yang-Baxter at the 1e-2
  level.
* The symmetrizing factor is ``exp(2i lam (tilde(beta) - tilde(alpha)) u)``,
  which is what ``U**(tilde(beta) - tilde(alpha))`` reduces to under the
  additive/multiplicative dictionary below.  Any factor of this form is a
  gauge; this sign makes the c+ weight the constant ``[2][n-2]``.

The additive and multiplicative weights agree through
``w_mult(U = k**(-u)) == -4 exp(i lam (2u - n)) * w_add(u)`` for every
vertex; see :func:`overall_factor`.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .bracket import CrossingParameter, bracket
from .laurent import extract_laurent_span


def conjugate(alpha: int, n: int) -> int:
    return n + 1 - alpha


def bar(alpha: int, n: int) -> float:
    mid = (n + 1) / 2
    if alpha < mid:
        return alpha + 0.5
    if alpha > mid:
        return alpha - 0.5
    return float(alpha)


def tilde(alpha: int, n: int) -> float:
    """``alpha - bar(alpha)``: -1/2 below the middle colour, 0 on it, +1/2 above."""
    return alpha - bar(alpha, n)


@dataclass(frozen=True)
class ModelParams:
    """Rank ``n`` and crossing parameter of the so(n) model."""

    n: int
    crossing: CrossingParameter

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if self.crossing.is_discrete and self.crossing.n != self.n:
            raise ValueError("discrete crossing parameter built for a different n")

    @classmethod
    def discrete(cls, n: int, m: int) -> "ModelParams":
        return cls(n, CrossingParameter.discrete(m, n))

    @classmethod
    def continuous(cls, n: int, lam) -> "ModelParams":
        return cls(n, CrossingParameter(lam))

    @classmethod
    def from_lambda(cls, n: int, lam: float, atol: float = 1e-12) -> "ModelParams":
        """Tag ``lam`` as discrete when it sits on ``m pi / (2(n-3))``."""
        if n >= 4:
            q = lam * 2 * (n - 3) / math.pi
            m = round(q)
            if m != 0 and abs(q - m) < atol:
                return cls.discrete(n, m)
        return cls.continuous(n, lam)

    @property
    def lam(self):
        return self.crossing.lam

    @property
    def m(self) -> int | None:
        return self.crossing.m

    @property
    def k(self) -> complex:
        return self.crossing.k

    @property
    def is_discrete(self) -> bool:
        return self.crossing.is_discrete

    @property
    def formula_applies(self) -> bool:
        """Whether the determinant formula is claimed for these parameters."""
        return self.n == 3 or self.is_discrete

    @property
    def degenerate(self) -> bool:
        """``[2] == 0``: every colour-changing weight vanishes and the DW partition function is 0."""
        return abs(bracket(2, self.crossing)) < 1e-12

    @property
    def dw_sign(self) -> int:
        """Sign ``eps`` with ``Z_LxL = eps**L * (N/D) det M``.

        It is the ratio ``[n-2]/[n-4]`` that separates the c+ weight from the
        1x1 determinant: ``(-1)**(m+1)`` on the discrete values, ``-1`` for
        ``n = 3``.  Off the discrete values there is no identity to fix, and
        ``+1`` is returned.
        """
        if self.n == 3:
            return -1
        if self.is_discrete:
            return 1 if self.m % 2 else -1
        return 1

    def __str__(self):
        if self.is_discrete:
            return f"n={self.n}, m={self.m} (lam={self.lam:.6g})"
        return f"n={self.n}, lam={self.lam}"


class VertexState(NamedTuple):
    rho: int
    sigma: int
    mu: int
    nu: int

    @property
    def conserving(self) -> bool:
        return self.rho + self.mu == self.sigma + self.nu


C_PLUS = "c+"


def c_plus_state(n: int) -> VertexState:
    return VertexState(1, n, n, 1)


@lru_cache(maxsize=None)
def structure(n: int) -> tuple:
    """All structurally nonzero vertices as ``(state, family, alpha, beta)``.

    The eight families partition the support of the R-matrix; no state is
    listed twice.
    """
    out = []
    cj = lambda a: conjugate(a, n)
    for a, b in itertools.product(range(1, n + 1), repeat=2):
        if a == b:
            fam = "w4" if a == cj(a) else "w1"
            out.append((VertexState(a, a, a, a), fam, a, a))
        elif b == cj(a):
            out.append((VertexState(a, a, b, b), "w3", a, b))
        else:
            out.append((VertexState(a, a, b, b), "w2", a, b))
        if a != b and a != cj(b):
            out.append((VertexState(a, b, b, a), "w5" if a < b else "w6", a, b))
        if a != b:
            out.append((VertexState(a, b, cj(a), cj(b)), "w7" if a < b else "w8", a, b))
    return tuple(out)


@lru_cache(maxsize=None)
def _family_index(n: int) -> dict:
    return {s: (f, a, b) for s, f, a, b in structure(n)}


def family(state, n: int):
    """``(family, alpha, beta)`` for a structurally nonzero state, else ``None``."""
    return _family_index(n).get(VertexState(*state))


def state_of(fam: str, alpha: int, beta: int | None, n: int) -> VertexState:
    """Inverse of :func:`family`; raises ``ValueError`` on inadmissible colours."""
    cj = lambda a: conjugate(a, n)
    b = alpha if beta is None else beta
    states = {
        "w1": VertexState(alpha, alpha, alpha, alpha),
        "w4": VertexState(alpha, alpha, alpha, alpha),
        "w2": VertexState(alpha, alpha, b, b),
        "w3": VertexState(alpha, alpha, cj(alpha), cj(alpha)),
        "w5": VertexState(alpha, b, b, alpha),
        "w6": VertexState(alpha, b, b, alpha),
        "w7": VertexState(alpha, b, cj(alpha), cj(b)),
        "w8": VertexState(alpha, b, cj(alpha), cj(b)),
    }
    st = states[fam]
    got = family(st, n)
    if got is None or got[0] != fam:
        raise ValueError(f"colours ({alpha}, {beta}) are not admissible for {fam} at n={n}")
    return st


class _Brackets:
    """The handful of brackets every weight at one ``u`` is built from."""

    __slots__ = ("u", "lam", "n", "b_u", "b_u2", "b_un2", "b_un4", "b2", "bn2")

    def __init__(self, u, params: ModelParams):
        n, c = params.n, params.crossing
        self.u, self.lam, self.n = u, params.lam, n
        self.b_u = bracket(u, c)
        self.b_u2 = bracket(u + 2, c)
        self.b_un2 = bracket(u + n - 2, c)
        self.b_un4 = bracket(u + n - 4, c)
        self.b2 = bracket(2, c)
        self.bn2 = bracket(n - 2, c)

    def weight(self, fam: str, a: int, b: int):
        n, u, lam = self.n, self.u, self.lam
        if fam == "w1":
            return self.b_un2 * self.b_u2
        if fam == "w2":
            return self.b_un2 * self.b_u
        if fam == "w3":
            return self.b_un4 * self.b_u
        if fam == "w4":
            return self.b_un2 * self.b_u + self.b2 * self.bn2
        sym = cmath.exp(2j * lam * (tilde(b, n) - tilde(a, n)) * u)
        if fam == "w5":
            return self.b_un2 * self.b2 * cmath.exp(-1j * lam * u) * sym
        if fam == "w6":
            return self.b_un2 * self.b2 * cmath.exp(1j * lam * u) * sym
        delta = 1 if a == conjugate(b, n) else 0
        shift = -(n - 2) if fam == "w7" else n - 2
        core = self.b_un2 * delta - self.b_u * cmath.exp(1j * lam * (2 * bar(b, n) - 2 * bar(a, n) + shift))
        turn = -1j if fam == "w7" else 1j
        return core * self.b2 * cmath.exp(turn * lam * u) * sym


def weight_additive(state, u, params: ModelParams) -> complex:
    """Weight of ``state`` at rapidity difference ``u = -x + y``; 0 off the support."""
    tag = family(state, params.n)
    if tag is None:
        return 0.0
    return _Brackets(u, params).weight(*tag)


def family_weight(fam: str, u, params: ModelParams, alpha: int = 1, beta: int | None = None) -> complex:
    """Weight of family ``fam`` with colours ``alpha, beta`` (defaults suit w1-w3)."""
    if fam == C_PLUS:
        return weight_additive(c_plus_state(params.n), u, params)
    if fam in ("w1", "w2", "w3", "w4"):
        b = _Brackets(u, params)
        return b.weight(fam, alpha, alpha)
    return weight_additive(state_of(fam, alpha, beta, params.n), u, params)


def w1(u, params):
    return bracket(u + params.n - 2, params.crossing) * bracket(u + 2, params.crossing)


def w2(u, params):
    return bracket(u + params.n - 2, params.crossing) * bracket(u, params.crossing)


def w3(u, params):
    return bracket(u + params.n - 4, params.crossing) * bracket(u, params.crossing)


def w_cplus(u, params):
    return weight_additive(c_plus_state(params.n), u, params)


def overall_factor(u, params: ModelParams) -> complex:
    """State-independent ratio ``w_mult(k**(-u)) / w_add(u)``."""
    return -4.0 * cmath.exp(1j * params.lam * (2 * u - params.n))


def _upow(U, p: float, sqrt_u):
    twice = round(2 * p)
    if twice % 2 == 0:
        return U ** (twice // 2)
    return sqrt_u**twice


def weight_multiplicative(state, X, Y, params: ModelParams, sqrt_u=None) -> complex:
    """Multiplicative weight at ``U = X / Y``.

    Half-integer powers of ``U`` use ``sqrt_u``; by default the principal
    root ``exp(Log(U) / 2)``.  For ``X = k**x``, ``Y = k**y`` this equals
    ``overall_factor(u) * weight_additive(state, u)`` with ``u = -x + y`` as
    long as the principal branch is the right one, i.e. ``|Re(lam u)| < pi/2``.
    """
    n, k = params.n, params.k
    tag = family(state, n)
    if tag is None:
        return 0.0
    fam, a, b = tag
    U = X / Y
    if sqrt_u is None:
        sqrt_u = cmath.sqrt(U)
    xi = k ** (n - 2)
    if fam == "w1":
        return (U - xi) * (U - k**2)
    if fam == "w2":
        return (U - xi) * (U - 1) * k
    if fam == "w3":
        return (U - k ** (n - 4)) * (U - 1) * k**2
    if fam == "w4":
        return (U - xi) * (U - 1) * k + (1 - xi) * (1 - k**2) * U
    sym = _upow(U, tilde(b, n) - tilde(a, n), sqrt_u)
    if fam in ("w5", "w6"):
        w = (U - xi) * (1 - k**2) * sym
        return w * U if fam == "w6" else w
    delta = 1 if a == conjugate(b, n) else 0
    if fam == "w7":
        return ((U - xi) * delta - (U - 1) * k ** (bar(a, n) - bar(b, n) + n - 2)) * (1 - k**2) * sym
    return ((U - xi) * delta - (U - 1) * k ** (bar(a, n) - bar(b, n))) * (1 - k**2) * sym * U


def weight_tensor(u, params: ModelParams) -> np.ndarray:
    """Dense array ``W[rho-1, sigma-1, mu-1, nu-1]`` of weights at ``u``."""
    n = params.n
    W = np.zeros((n, n, n, n), dtype=complex)
    br = _Brackets(u, params)
    for st, fam, a, b in structure(n):
        W[st.rho - 1, st.sigma - 1, st.mu - 1, st.nu - 1] = br.weight(fam, a, b)
    return W


def assemble_r_matrix(u, params: ModelParams) -> np.ndarray:
    """The ``n**2 x n**2`` R-matrix at ``u``.

    Index convention: row ``(sigma-1)*n + (nu-1)`` (outgoing pair), column
    ``(rho-1)*n + (mu-1)`` (incoming pair), so ``R`` maps incoming colour
    pairs to outgoing ones.
    """
    n = params.n
    W = weight_tensor(u, params)
    return W.transpose(1, 3, 0, 2).reshape(n * n, n * n)


def _embed(R: np.ndarray, n: int, pair: tuple) -> np.ndarray:
    T = R.reshape(n, n, n, n)
    eye = np.eye(n)
    if pair == (1, 2):
        return np.einsum("abcd,ef->abecdf", T, eye).reshape(n**3, n**3)
    if pair == (2, 3):
        return np.einsum("abcd,ef->eabfcd", T, eye).reshape(n**3, n**3)
    if pair == (1, 3):
        return np.einsum("abcd,ef->aebcfd", T, eye).reshape(n**3, n**3)
    raise ValueError(pair)


def ybe_residual(u, v, params: ModelParams, transpose: bool = False) -> float:
    """Normalized max-norm of ``R12(u) R13(u+v) R23(v) - R23(v) R13(u+v) R12(u)``.

    ``transpose=True`` runs the same check with the transposed index
    convention (rows = incoming pair).
    """
    n = params.n
    mats = [assemble_r_matrix(w, params) for w in (u, u + v, v)]
    if transpose:
        mats = [m.T for m in mats]
    r12, r13, r23 = (_embed(m, n, p) for m, p in zip(mats, ((1, 2), (1, 3), (2, 3))))
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    scale = np.abs(lhs).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(lhs - rhs).max() / scale)


def weight_degree(fam: str, colors, params: ModelParams, samples: int = 16) -> float:
    """Degree (highest minus lowest power) of a weight in its horizontal multiplicative variable.

    The weight is sampled as a function of ``t = X**(1/2)`` on the unit
    circle; the returned degree is in ``X``.
    """
    alpha, beta = (colors if isinstance(colors, tuple) else (colors, None))
    if fam == C_PLUS:
        st = c_plus_state(params.n)
    else:
        st = state_of(fam, alpha, beta, params.n)
    lam = params.lam

    def f(t):
        # t = exp(-i lam x) and y = 0, so u = -x = -i log(t) / lam
        u = -1j * cmath.log(t) / lam
        return weight_additive(st, u, params)

    return extract_laurent_span(f, samples).span_x
