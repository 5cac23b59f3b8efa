"""Trigonometric brackets, the additive/multiplicative variable map and jets.

``bracket(x, lam)`` is ``sin(lam * x)``; ``angle_bracket`` its reciprocal.
When the crossing parameter is one of the discrete values
``m * pi / (2 * (n - 3))`` and ``x`` is real, the sine is evaluated as
``sin(pi * q)`` with ``q = m * x / (2 * (n - 3))`` reduced exactly modulo 2,
so brackets that vanish analytically (``[2]`` at ``lam = pi / 2``, say)
come out as exact zeros instead of ``1e-16`` residues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

POLE_TOL = 1e-12


@dataclass(frozen=True)
class CrossingParameter:
    """Crossing parameter ``lam`` in radians, optionally tagged as discrete.

    Build discrete values with :meth:`discrete`; the plain constructor gives
    a continuous value.
    """

    lam: complex
    m: int | None = None
    n: int | None = None

    def __post_init__(self):
        if (self.m is None) != (self.n is None):
            raise ValueError("discrete crossing parameter needs both m and n")
        if self.m is not None:
            if self.n < 4:
                raise ValueError("discrete crossing values need n >= 4")
            expected = self.m * math.pi / (2 * (self.n - 3))
            if abs(self.lam - expected) > 4 * np.finfo(float).eps * max(1.0, abs(expected)):
                raise ValueError(f"lam={self.lam!r} is not m*pi/(2(n-3)) = {expected!r}")

    @classmethod
    def discrete(cls, m: int, n: int) -> "CrossingParameter":
        if n < 4:
            raise ValueError("discrete crossing values need n >= 4")
        return cls(m * math.pi / (2 * (n - 3)), int(m), int(n))

    @property
    def is_discrete(self) -> bool:
        return self.m is not None

    @property
    def k(self) -> complex:
        """Multiplicative crossing variable ``exp(-2i lam)``."""
        return cmath.exp(-2j * self.lam)

    def __float__(self) -> float:
        return float(np.real(self.lam))


def _lam_of(lam) -> complex:
    return lam.lam if isinstance(lam, CrossingParameter) else lam


def _sinpi(q: float) -> float:
    r = math.remainder(q, 2.0)  # exact, in [-1, 1]
    if r == 0.0 or abs(r) == 1.0:
        return 0.0
    if r == 0.5:
        return 1.0
    if r == -0.5:
        return -1.0
    return math.sin(math.pi * r)


def bracket(x, lam):
    """Return ``[x] = sin(lam * x)``."""
    if isinstance(lam, CrossingParameter) and lam.is_discrete and _is_real(x):
        return _sinpi(lam.m * float(np.real(x)) / (2 * (lam.n - 3)))
    lv = _lam_of(lam)
    if _is_real(x) and _is_real(lv):
        return math.sin(float(np.real(lv)) * float(np.real(x)))
    return cmath.sin(lv * x)


def angle_bracket(x, lam, tol: float = POLE_TOL):
    """Return ``<x> = 1/[x]``; raise :class:`PoleError` on a bracket zero."""
    b = bracket(x, lam)
    scale = max(1.0, abs(_lam_of(lam) * x))
    if abs(b) < tol * scale:
        raise PoleError(f"[{x}] vanishes at lam={_lam_of(lam)}")
    return 1.0 / b


def to_multiplicative(x, lam) -> complex:
    """Map an additive rapidity to ``k**x = exp(-2i lam x)``."""
    return cmath.exp(-2j * _lam_of(lam) * x)


def _is_real(z) -> bool:
    return bool(np.isrealobj(z) or np.imag(z) == 0)


class Jet:
    """Truncated Taylor series ``c0 + c1 h + ... + cd h**d`` with complex coefficients.

    Arithmetic is exact truncated power-series arithmetic; mixing jets of
    different order truncates to the smaller one.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, t0, order: int) -> "Jet":
        """The identity function ``t`` expanded at ``t0``."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = t0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    def _coerce(self, other):
        if isinstance(other, Jet):
            d = min(self.order, other.order)
            return self.coeffs[: d + 1], other.coeffs[: d + 1]
        return self.coeffs, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is None:
            c = a.copy()
            c[0] += other
            return Jet(c)
        return Jet(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return Jet(a * other)
        d = a.size - 1
        return Jet(np.convolve(a, b)[: d + 1])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        c = self.coeffs
        if c[0] == 0:
            raise PoleError("jet reciprocal needs a nonzero constant term")
        r = np.zeros_like(c)
        r[0] = 1.0 / c[0]
        for k in range(1, c.size):
            r[k] = -np.dot(c[1 : k + 1], r[k - 1 :: -1][:k]) * r[0]
        return Jet(r)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.coeffs / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __call__(self, h):
        """Evaluate the truncated polynomial at offset ``h``."""
        return np.polyval(self.coeffs[::-1], h)

    def derivative(self, j: int) -> complex:
        """``j``-th derivative at the expansion point."""
        return math.factorial(j) * self.coeffs[j]

    def __repr__(self):
        return f"Jet({self.coeffs.tolist()!r})"


def jet_sin_affine(a, b, t0, d: int) -> Jet:
    """Taylor coefficients of ``t -> sin(a t + b)`` at ``t0`` to order ``d``."""
    if d < 0:
        raise ValueError("jet order must be >= 0")
    phase = a * t0 + b
    return Jet([a**j * cmath.sin(phase + j * math.pi / 2) / math.factorial(j) for j in range(d + 1)])


def bracket_jet(u0, shift, lam, d: int) -> Jet:
    """Jet of ``h -> [u0 + shift + h]`` in the bracket variable."""
    lv = _lam_of(lam)
    c0 = bracket(u0 + shift, lam)
    jet = jet_sin_affine(lv, lv * (u0 + shift), 0.0, d)
    jet.coeffs[0] = c0  # keep the exact-zero evaluation path for the constant term
    return jet
