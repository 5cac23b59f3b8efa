"""Laurent coefficient extraction by sampling on a circle and taking a DFT."""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import AliasError, VanishingFunctionError


class LaurentSpan(NamedTuple):
    min_exp: int
    max_exp: int
    coeffs: dict  # exponent -> complex coefficient, retained terms only

    @property
    def span(self) -> int:
        return self.max_exp - self.min_exp

    @property
    def span_x(self) -> float:
        """Span in the multiplicative variable ``X = t**2``."""
        return self.span / 2


def laurent_coefficients(f: Callable[[complex], complex], samples: int, radius: float = 1.0):
    """Return ``(exponents, coefficients)`` of ``f`` from ``samples`` points on ``|t| = radius``.

    Exponents run over ``-(S//2) .. S - S//2 - 1``; anything outside that
    window aliases onto it.
    """
    S = int(samples)
    if S < 1:
        raise ValueError("need at least one sample")
    t = radius * np.exp(2j * np.pi * np.arange(S) / S)
    vals = np.array([f(tk) for tk in t], dtype=complex)
    c = np.fft.fft(vals) / S
    p = np.arange(S)
    p = np.where(p < S - S // 2, p, p - S)
    order = np.argsort(p)
    p, c = p[order], c[order]
    return p, c / radius ** p.astype(float)


def extract_laurent_span(
    f: Callable[[complex], complex],
    samples: int,
    radius: float = 1.0,
    rel_cutoff: float = 1e-8,
) -> LaurentSpan:
    """Exponent span of the Laurent polynomial ``f(t)``.

    Coefficients below ``rel_cutoff`` times the largest one are discarded.
    Raises :class:`AliasError` if a retained exponent is on the edge of the
    DFT window and :class:`VanishingFunctionError` if ``f`` is identically 0
    on the samples.
    """
    p, c = laurent_coefficients(f, samples, radius)
    mag = np.abs(c)
    top = mag.max()
    if top == 0.0:
        raise VanishingFunctionError("all samples vanish")
    keep = mag > rel_cutoff * top
    kept = p[keep]
    if kept.min() == p[0] or kept.max() == p[-1]:
        raise AliasError(f"retained exponent at DFT edge with S={samples}; increase samples")
    coeffs = {int(e): complex(v) for e, v in zip(kept, c[keep])}
    return LaurentSpan(int(kept.min()), int(kept.max()), coeffs)
