"""Block-determinant expression for the DW partition function.

``Z = eps**L * (N / D) * det M`` where

* ``N = prod_{i,j} w1 w2 w3 (-x_i + y_j)``,
* ``D = prod_{i<j} w2 w3 (-x_i + x_j) * w2 w3 (y_j - y_i)``,
* ``M`` is ``2L x 2L`` with the block in double-row ``j``, double-column ``i``
  equal to ``[[1/w2, 1/w1], [1/w3, 1/w2]]`` at ``u = -x_i + y_j``,
* ``eps = ModelParams.dw_sign``.

The identity holds for ``n = 3`` at any crossing parameter and for
``n >= 4`` at ``lam = m pi / (2(n-3))``.  Without ``eps`` it is off by a
sign for odd L when m is even, and for odd L at ``n = 3``.
"""

from __future__ import annotations

import warnings
from math import comb

import numpy as np
from scipy.linalg import get_lapack_funcs

from .bracket import POLE_TOL, angle_bracket, bracket, bracket_jet
from .errors import ConditionWarning, PoleError, PreconditionError
from .lattice import CORNER_TOL, Rapidities
from .model import ModelParams, w1, w2, w3


def _check_zero(value, what: str, tol: float = POLE_TOL):
    if abs(value) < tol:
        raise PoleError(f"{what} vanishes")
    return value


def prefactor_n(rap: Rapidities, params: ModelParams) -> complex:
    out = 1.0
    for i in range(rap.L):
        for j in range(rap.L):
            u = rap.u(i, j)
            out *= w1(u, params) * w2(u, params) * w3(u, params)
    return out


def prefactor_d(rap: Rapidities, params: ModelParams) -> complex:
    """Denominator product; raises :class:`PoleError` when two rapidities coalesce."""
    out = 1.0
    x, y = rap.x, rap.y
    for i in range(rap.L):
        for j in range(i + 1, rap.L):
            for d in (-x[i] + x[j], y[j] - y[i]):
                out *= _check_zero(w2(d, params), f"w2({d})") * _check_zero(w3(d, params), f"w3({d})")
    return out


def entry_functions(u, params: ModelParams):
    """``(1/w2, 1/w1, 1/w3)`` at ``u`` with pole guards."""
    n, c = params.n, params.crossing
    a_u = angle_bracket(u, c)
    a_n2 = angle_bracket(u + n - 2, c)
    inv_w2 = a_n2 * a_u
    inv_w1 = a_n2 * angle_bracket(u + 2, c)
    inv_w3 = angle_bracket(u + n - 4, c) * a_u
    return inv_w2, inv_w1, inv_w3


def block_matrix(rap: Rapidities, params: ModelParams) -> np.ndarray:
    """The ``2L x 2L`` matrix ``M``: rows pair up by ``y_j``, columns by ``x_i``."""
    L = rap.L
    M = np.empty((2 * L, 2 * L), dtype=complex)
    for i in range(L):
        for j in range(L):
            iw2, iw1, iw3 = entry_functions(rap.u(i, j), params)
            M[2 * j, 2 * i] = iw2
            M[2 * j, 2 * i + 1] = iw1
            M[2 * j + 1, 2 * i] = iw3
            M[2 * j + 1, 2 * i + 1] = iw2
    return M


def lu_det(M: np.ndarray) -> complex:
    """Determinant from an LU factorization with partial pivoting (LAPACK getrf).

    An exactly singular matrix gives 0 (getrf reports it through ``info``).
    """
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    (getrf,) = get_lapack_funcs(("getrf",), (M,))
    lu, piv, info = getrf(M)
    if info < 0:
        raise ValueError(f"getrf: illegal argument {-info}")
    sign = (-1) ** int(np.sum(piv != np.arange(piv.size)))
    return complex(sign * np.prod(np.diag(lu)))


def _warn_if_off_condition(params: ModelParams, warn: bool = True):
    if warn and not params.formula_applies:
        warnings.warn(
            f"determinant formula evaluated off the discrete crossing values ({params})",
            ConditionWarning,
            stacklevel=3,
        )


def z_determinant(rap: Rapidities, params: ModelParams, signed: bool = True, warn: bool = True) -> complex:
    """``eps**L (N/D) det M``; ``signed=False`` drops the ``eps**L`` factor.

    Off the discrete crossing values (n >= 4) a :class:`ConditionWarning` is
    issued unless ``warn=False``; the value is computed either way.
    """
    _warn_if_off_condition(params, warn)
    D = prefactor_d(rap, params)
    val = prefactor_n(rap, params) / D * lu_det(block_matrix(rap, params))
    if signed:
        val *= params.dw_sign**rap.L
    return val


def determinant_scale(rap: Rapidities, params: ModelParams) -> float:
    """Hadamard bound ``|N/D| prod ||row_k(M)||``, an upper bound on ``|z_determinant|``."""
    M = block_matrix(rap, params)
    nd = abs(prefactor_n(rap, params) / prefactor_d(rap, params))
    return float(nd * np.prod(np.linalg.norm(M, axis=1)))


def x_double_row(rap: Rapidities, params: ModelParams, i: int, part: str) -> np.ndarray:
    """Entries belonging to ``x_i``, laid out as a row across the ``y`` columns.

    ``part="upper"`` gives ``(1/w2, 1/w1)`` and ``part="lower"`` gives
    ``(1/w3, 1/w2)`` for each ``y_k`` in turn.  These are the columns
    ``2i`` and ``2i-1`` of ``M`` read as rows, so coincidences between them
    produce zeros of ``det M``.
    """
    out = []
    for k in range(rap.L):
        iw2, iw1, iw3 = entry_functions(rap.u(i, k), params)
        out.extend((iw2, iw1) if part == "upper" else (iw3, iw2))
    return np.array(out, dtype=complex)


def coincidence_sign(params: ModelParams) -> int:
    if params.n == 3 or not params.is_discrete:
        return 1
    return -1 if params.m % 2 else 1


def row_coincidence_error(rap: Rapidities, params: ModelParams, i: int, j: int, which: str) -> float:
    """Max relative deviation between the two coinciding rows (see :func:`row_coincidence_check`)."""
    n = params.n
    shift = n - 2 if which == "upper" else n - 4
    expr = -rap.x[i] + rap.x[j] + shift
    if abs(expr) >= CORNER_TOL * (1 + abs(rap.x[i])):
        raise PreconditionError(f"{which} coincidence needs -x_i + x_j + {shift} = 0")
    other = "lower" if which == "upper" else "upper"
    a = x_double_row(rap, params, i, which)
    b = coincidence_sign(params) * x_double_row(rap, params, j, other)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-30)
    return float(np.max(np.abs(a - b) / scale))


def row_coincidence_check(rap, params, i, j, which: str, tol: float = 1e-9) -> bool:
    """Whether the upper (lower) row of ``x_i`` equals ``eps`` times the lower (upper) row of ``x_j``.

    ``which="upper"`` needs ``-x_i + x_j + n - 2 = 0``; ``which="lower"``
    needs ``-x_i + x_j + n - 4 = 0``.  ``eps = (-1)**m`` on the discrete
    values and ``+1`` for ``n = 3``.
    """
    return row_coincidence_error(rap, params, i, j, which) < tol


def _entry_jets(u0, params: ModelParams, order: int):
    n, c = params.n, params.crossing
    b = {s: bracket_jet(u0, s, c, order) for s in (0, 2, n - 2, n - 4)}
    for s, jet in b.items():
        if abs(jet.coeffs[0]) < POLE_TOL:
            raise PoleError(f"[{u0} + {s}] vanishes at the homogeneous point")
    inv_w2 = (b[n - 2] * b[0]).reciprocal()
    inv_w1 = (b[n - 2] * b[2]).reciprocal()
    inv_w3 = (b[n - 4] * b[0]).reciprocal()
    return ((inv_w2, inv_w1), (inv_w3, inv_w2))


def _coalescence_factor(params: ModelParams) -> complex:
    """``lim w2(d) w3(d) / d**2`` as ``d -> 0``."""
    lam, c = params.lam, params.crossing
    val = lam**2 * bracket(params.n - 2, c) * bracket(params.n - 4, c)
    if abs(val) < POLE_TOL:
        raise PoleError("w2 w3 has a zero of order > 2 at coincidence (n = 4 or [n-2] = 0)")
    return val


def _diag_product(u0, params):
    return w1(u0, params) * w2(u0, params) * w3(u0, params)


def z_semi_homogeneous(x, ys, params: ModelParams, signed: bool = True, warn: bool = True) -> complex:
    """Limit of :func:`z_determinant` as every ``x_i -> x``, with distinct ``ys``."""
    _warn_if_off_condition(params, warn)
    if params.degenerate:
        return 0j
    L = len(ys)
    K = np.empty((2 * L, 2 * L), dtype=complex)
    N = 1.0
    for j, yj in enumerate(ys):
        u0 = -x + yj
        N *= _diag_product(u0, params) ** L
        F = _entry_jets(u0, params, L - 1)
        for a in range(L):
            for r in range(2):
                for c in range(2):
                    K[2 * j + r, 2 * a + c] = (-1) ** a * F[r][c].coeffs[a]
    D = _coalescence_factor(params) ** (L * (L - 1) // 2)
    for i in range(L):
        for j in range(i + 1, L):
            d = ys[j] - ys[i]
            D *= _check_zero(w2(d, params), f"w2({d})") * _check_zero(w3(d, params), f"w3({d})")
    val = N / D * lu_det(K)
    return val * params.dw_sign**L if signed else val


def z_homogeneous(x, y, L: int, params: ModelParams, signed: bool = True, warn: bool = True) -> complex:
    """Limit of :func:`z_determinant` as every ``x_i -> x`` and every ``y_j -> y``.

    Each block entry ``F(-x_i + y_j)`` is expanded in a jet of order
    ``2L - 2`` around ``u0 = -x + y``.  The coefficient of ``s**a t**b`` in
    ``F(u0 - s + t)`` is ``(-1)**a C(a+b, a) F_{a+b}``, where ``F_k`` is the
    k-th Taylor coefficient.  Those coefficients fill the limiting matrix.
    The coalescing pairs of ``D`` each contribute
    ``lam**2 [n-2][n-4]`` times the squared separation, which cancels the
    double zeros of ``det M``.

    When ``[2] = 0`` the brackets obey ``[u+2] = +-[u]`` and
    ``[u+n-2] = +-[u+n-4]``, so every block is ``1/w2`` times the same rank-1
    matrix and ``det M`` vanishes identically.  The limit is then exactly 0
    and is returned as such (the coalescence factor can vanish there too,
    e.g. ``n = 4``).
    """
    if L < 1:
        raise ValueError("need L >= 1")
    _warn_if_off_condition(params, warn)
    if params.degenerate:
        return 0j
    u0 = -x + y
    F = _entry_jets(u0, params, 2 * L - 2)
    K = np.empty((2 * L, 2 * L), dtype=complex)
    for b in range(L):
        for a in range(L):
            coef = (-1) ** a * comb(a + b, a)
            for r in range(2):
                for c in range(2):
                    K[2 * b + r, 2 * a + c] = coef * F[r][c].coeffs[a + b]
    N = _diag_product(u0, params) ** (L * L)
    D = _coalescence_factor(params) ** (L * (L - 1)) if L > 1 else 1.0
    val = N / D * lu_det(K)
    return val * params.dw_sign**L if signed else val


def analytic_value(f, z0, radius: float = 0.05, samples: int = 16) -> complex:
    """Value at ``z0`` of a function analytic near ``z0`` but not evaluable there.

    Uses the mean value over a circle, ``f(z0) = mean_k f(z0 + r w**k)``,
    which is exact up to terms of order ``r**samples``.  Used for the
    determinant side at corner specializations, where individual entries of
    ``M`` sit on poles that ``N`` cancels.
    """
    pts = z0 + radius * np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
    return complex(np.mean([f(p) for p in pts]))


def richardson(hs, values) -> complex:
    """Extrapolate ``values[k] = F(hs[k])`` to ``h = 0`` by Neville's polynomial scheme."""
    h = [complex(v) for v in hs]
    p = [complex(v) for v in values]
    n = len(p)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / (h[i] - h[i + k])
    return p[0]
