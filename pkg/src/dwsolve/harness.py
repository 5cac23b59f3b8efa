"""Verification campaigns comparing the lattice sum with the determinant formula.

Every campaign returns a :class:`VerificationReport` made of
:class:`CheckRecord` entries.  Statuses:

``pass`` / ``fail``
    the measured value is inside / outside the tolerance.
``degenerate``
    both sides vanish identically (``[2] = 0``, e.g. every discrete point
    of ``n = 4``): each value is below ``VANISH_TOL`` times its own
    magnitude scale, so a relative difference would only compare round-off.
``indeterminate``
    sweep points off the discrete values whose difference falls between
    the agreement and the failure thresholds.
``skipped``
    the check does not apply (``L = 1`` symmetry) or hit a pole.

Only ``fail`` makes a report fail.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .determinant import (
    analytic_value,
    block_matrix,
    determinant_scale,
    lu_det,
    prefactor_d,
    row_coincidence_error,
    z_determinant,
)
from .errors import AliasError, PoleError, VanishingFunctionError
from .lattice import (
    Rapidities,
    _check_budget,
    z_bruteforce,
    z_bruteforce_corner_left,
    z_bruteforce_corner_right,
    z_bruteforce_scale,
    z_multiplicative_slice,
)
from .laurent import extract_laurent_span
from .model import ModelParams, w_cplus, ybe_residual

EQ_TOL = 1e-9
YBE_TOL = 1e-10
SYM_TOL = 1e-10
INIT_TOL = 1e-10
POLE_VARIATION_TOL = 1e-2
OFF_CONDITION_TOL = 1e-3
VANISH_TOL = 1e-12
POLE_EPS = (1e-3, 1e-4, 1e-5)


# ---------------------------------------------------------------- comparison


def rel_diff(a, b) -> float:
    """``|a - b| / max(|a|, |b|, 1e-30)``."""
    return float(abs(a - b) / max(abs(a), abs(b), 1e-30))


def _vanishing_level(value, scale) -> float:
    if value == 0:
        return 0.0
    return float(abs(value) / scale) if scale > 0 else math.inf


def compare(a, b, tol: float, scale_a: float | None = None, scale_b: float | None = None):
    """Return ``(status, measured)`` for the claim ``a == b``.

    With both scales given, the pair is ``degenerate`` when each value is
    below ``VANISH_TOL`` times its scale; ``measured`` is then the larger
    vanishing level.  Otherwise ``measured`` is :func:`rel_diff`.
    """
    if scale_a is not None and scale_b is not None:
        va, vb = _vanishing_level(a, scale_a), _vanishing_level(b, scale_b)
        if va <= VANISH_TOL and vb <= VANISH_TOL:
            return "degenerate", max(va, vb)
    d = rel_diff(a, b)
    return ("pass" if d < tol else "fail"), d


def _merge(results):
    """Combine ``(status, measured)`` pairs: any fail fails; all degenerate is degenerate."""
    statuses = [s for s, _ in results]
    worst = max(m for _, m in results)
    if "fail" in statuses:
        return "fail", worst
    if all(s == "degenerate" for s in statuses):
        return "degenerate", worst
    return "pass", max(m for s, m in results if s != "degenerate")


# ---------------------------------------------------------------- report types


def _jsonable(v):
    if isinstance(v, (bool, type(None), str, int)):
        return v
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(float(v.real)), "im": _jsonable(float(v.imag))}
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    raise TypeError(f"cannot serialize {type(v)}")


def fmt(v) -> str:
    """17-significant-digit text form of a real or complex number."""
    if v is None:
        return ""
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, (float, np.floating, int, np.integer)):
        return f"{float(v):.17g}"
    return str(v)


@dataclass
class CheckRecord:
    name: str
    status: str
    measured: Any
    tolerance: float | None
    inputs: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def inputs_digest(self) -> str:
        blob = json.dumps(_jsonable(self.inputs), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "measured": _jsonable(self.measured),
            "tolerance": self.tolerance,
            "inputs_digest": self.inputs_digest,
            "inputs": _jsonable(self.inputs),
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    campaign: str
    params: dict
    seed: int | None
    checks: list
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "campaign": self.campaign,
            "params": _jsonable(self.params),
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["campaign", "n", "m", "lambda", "L", "seed", "name", "status", "measured", "tolerance", "inputs_digest", "detail"])
        p = self.params
        for c in self.checks:
            w.writerow([
                self.campaign, p.get("n"), fmt(p.get("m")), fmt(p.get("lambda")), p.get("L"), self.seed,
                c.name, c.status, fmt(c.measured), fmt(c.tolerance), c.inputs_digest, c.detail,
            ])
        return buf.getvalue()


def _params_dict(params: ModelParams, L: int) -> dict:
    return {"n": params.n, "m": params.m, "lambda": params.lam, "L": L}


def _run_tasks(tasks, workers: int):
    """Run zero-argument callables, keeping input order in the output."""
    if workers <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda t: t(), tasks))


# ---------------------------------------------------------------- sampling


MAX_ENTRY = 1e3


def sample_rapidities(rng, L: int, params: ModelParams, tries: int = 100) -> Rapidities:
    """Uniform real rapidities in [0.1, 0.9], redrawn near poles of ``M`` or ``D``.

    A draw is rejected when an entry of ``M`` exceeds ``MAX_ENTRY`` in
    magnitude or a factor of ``D`` vanishes.
    """
    for _ in range(tries):
        rap = Rapidities.random(L, rng)
        try:
            if np.abs(block_matrix(rap, params)).max() > MAX_ENTRY:
                continue
            prefactor_d(rap, params)
            return rap
        except PoleError:
            continue
    raise PoleError("could not draw pole-free rapidities")


def _rap_inputs(rap: Rapidities) -> dict:
    return {"x": list(rap.x), "y": list(rap.y)}


def _zdet(rap, params):
    return z_determinant(rap, params, warn=False)


def _equality(rap, params, tol=EQ_TOL):
    a = z_bruteforce(rap, params)
    b = _zdet(rap, params)
    return compare(a, b, tol, z_bruteforce_scale(rap, params), determinant_scale(rap, params))


# ---------------------------------------------------------------- suite checks


def check_ybe(params, L, rng, pairs: int = 5):
    uv = [(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))) for _ in range(pairs)]
    res = max(ybe_residual(u, v, params) for u, v in uv)
    return [CheckRecord("ybe_residual", "pass" if res < YBE_TOL else "fail", res, YBE_TOL, {"uv": uv})]


def _symmetry(name, f, scale, rap, L, which, tol=SYM_TOL):
    if L == 1:
        return CheckRecord(name, "skipped", None, tol, _rap_inputs(rap), "L=1")
    base, sbase = f(rap), scale(rap)
    results = []
    for perm in itertools.permutations(range(L)):
        r = rap.permuted(px=perm) if which == "x" else rap.permuted(py=perm)
        results.append(compare(base, f(r), tol, sbase, scale(r)))
    status, measured = _merge(results)
    return CheckRecord(name, status, measured, tol, _rap_inputs(rap))


def check_symmetry(params, L, rng):
    rap = sample_rapidities(rng, L, params)
    lhs = lambda r: z_bruteforce(r, params)  # noqa: E731
    lhs_s = lambda r: z_bruteforce_scale(r, params)  # noqa: E731
    rhs = lambda r: _zdet(r, params)  # noqa: E731
    rhs_s = lambda r: determinant_scale(r, params)  # noqa: E731
    return [
        _symmetry("symmetry_lhs_x", lhs, lhs_s, rap, L, "x"),
        _symmetry("symmetry_lhs_y", lhs, lhs_s, rap, L, "y"),
        _symmetry("symmetry_rhs_x", rhs, rhs_s, rap, L, "x"),
        _symmetry("symmetry_rhs_y", rhs, rhs_s, rap, L, "y"),
    ]


def check_d_symmetry(params, L, rng):
    rap = sample_rapidities(rng, L, params)
    if L == 1:
        return [CheckRecord("d_symmetry", "skipped", None, SYM_TOL, _rap_inputs(rap), "L=1")]
    base = prefactor_d(rap, params)
    worst = 0.0
    for perm in itertools.permutations(range(L)):
        worst = max(worst, rel_diff(base, prefactor_d(rap.permuted(px=perm), params)))
        worst = max(worst, rel_diff(base, prefactor_d(rap.permuted(py=perm), params)))
    return [CheckRecord("d_symmetry", "pass" if worst < SYM_TOL else "fail", worst, SYM_TOL, _rap_inputs(rap))]


def _with_x(rap, idx, value):
    x = list(rap.x)
    x[idx] = value
    return rap.replace(x=x)


def check_row_coincidence(params, L, rng):
    rap = sample_rapidities(rng, L, params)
    n = params.n
    if L == 1:
        return [
            CheckRecord(nm, "skipped", None, EQ_TOL, _rap_inputs(rap), "L=1")
            for nm in ("row_coincidence_upper", "row_coincidence_lower", "double_zero")
        ]
    out = []
    for which, shift in (("upper", n - 2), ("lower", n - 4)):
        r = _with_x(rap, 1, rap.x[0] - shift)
        try:
            err = row_coincidence_error(r, params, 0, 1, which)
            out.append(CheckRecord(f"row_coincidence_{which}", "pass" if err < EQ_TOL else "fail", err, EQ_TOL, _rap_inputs(r)))
        except PoleError as e:
            out.append(CheckRecord(f"row_coincidence_{which}", "skipped", None, EQ_TOL, _rap_inputs(r), str(e)))
    r = _with_x(rap, 1, rap.x[0])
    M = block_matrix(r, params)
    lu_scale = float(np.prod(np.linalg.norm(M, axis=1)))
    level = abs(lu_det(M)) / lu_scale
    out.append(CheckRecord("double_zero", "pass" if level < EQ_TOL else "fail", level, EQ_TOL, _rap_inputs(r)))
    return out


def pole_variation(values, floor: float) -> float:
    """Largest ``|v_k - v_last| / max(|v_k|, |v_last|, floor)`` over the approach sequence.

    ``floor`` is a magnitude scale of the partition function at the
    specialization.  An uncancelled simple pole makes the values grow like
    ``1/eps`` and drives this towards 1.  A genuine zero of Z at the
    specialization keeps it small.  A plain relative difference would read
    that zero as a failure.
    """
    last = values[-1]
    return max(abs(v - last) / max(abs(v), abs(last), floor, 1e-300) for v in values[:-1])


def check_pole_cancellation(params, L, rng):
    rap = sample_rapidities(rng, L, params)
    n = params.n
    out = []
    for name, shift in (("pole_cancellation_upper", n - 2), ("pole_cancellation_lower", n - 4)):
        if L == 1:
            out.append(CheckRecord(name, "skipped", None, POLE_VARIATION_TOL, _rap_inputs(rap), "L=1"))
            continue
        vals, scales = [], []
        for eps in POLE_EPS:
            r = _with_x(rap, 1, rap.x[0] - shift + eps)
            vals.append(_zdet(r, params))
            scales.append(determinant_scale(r, params))
        inputs = {**_rap_inputs(rap), "eps": list(POLE_EPS)}
        if all(_vanishing_level(v, sc) <= VANISH_TOL for v, sc in zip(vals, scales)):
            level = max(_vanishing_level(v, sc) for v, sc in zip(vals, scales))
            out.append(CheckRecord(name, "degenerate", level, POLE_VARIATION_TOL, inputs))
            continue
        floor = z_bruteforce_scale(_with_x(rap, 1, rap.x[0] - shift), params)
        var = pole_variation(vals, floor)
        status = "pass" if var < POLE_VARIATION_TOL else "fail"
        out.append(CheckRecord(name, status, var, POLE_VARIATION_TOL, inputs, "variation floored by the lattice magnitude scale"))
    return out


def _span_record(name, f, L, samples, inputs):
    expected = 2 * L - 2
    try:
        sp = extract_laurent_span(f, samples)
    except VanishingFunctionError as e:
        return CheckRecord(name, "degenerate", None, 0.0, inputs, f"identically zero: {e}")
    except AliasError as e:
        return CheckRecord(name, "fail", None, 0.0, inputs, str(e))
    except PoleError as e:
        return CheckRecord(name, "skipped", None, 0.0, inputs, str(e))
    detail = f"t exponents {sp.min_exp}..{sp.max_exp}; expected span in X {expected}"
    return CheckRecord(name, "pass" if sp.span_x == expected else "fail", sp.span_x, 0.0, inputs, detail)


def _rounded(value, scale):
    """``value``, or exactly 0 when it is below round-off relative to ``scale``."""
    return 0j if _vanishing_level(value, scale) <= VANISH_TOL else value


def check_laurent_span(params, L, rng, samples: int | None = None):
    rap = sample_rapidities(rng, L, params)
    S = samples or 8 * L + 8
    inputs = {**_rap_inputs(rap), "slice": "x0", "samples": S}

    def lhs_eval(r, p):
        return _rounded(z_bruteforce(r, p), z_bruteforce_scale(r, p))

    def rhs_eval(r, p):
        return _rounded(_zdet(r, p), determinant_scale(r, p))

    lhs = lambda t: z_multiplicative_slice(rap, ("x", 0), t, params, evaluator=lhs_eval)  # noqa: E731
    rhs = lambda t: z_multiplicative_slice(rap, ("x", 0), t, params, evaluator=rhs_eval)  # noqa: E731
    return [_span_record("laurent_span_lhs", lhs, L, S, inputs), _span_record("laurent_span_rhs", rhs, L, S, inputs)]


def _det_at(rap, params, idx):
    """Determinant side with ``x[idx]`` at a point where entries of ``M`` are singular."""
    f = lambda z: _zdet(_with_x(rap, idx, z), params)  # noqa: E731
    g = lambda z: determinant_scale(_with_x(rap, idx, z), params)  # noqa: E731
    return analytic_value(f, rap.x[idx]), analytic_value(g, rap.x[idx]).real


def _corner(name, corner, rap, params):
    inputs = _rap_inputs(rap)
    pref, red = corner(rap, params)
    recs = []
    lhs = z_bruteforce(rap, params)
    lhs_red = 1.0 if red is None else z_bruteforce(red, params)
    lhs_red_s = 1.0 if red is None else z_bruteforce_scale(red, params)
    st, me = compare(lhs, pref * lhs_red, EQ_TOL, z_bruteforce_scale(rap, params), abs(pref) * lhs_red_s)
    recs.append(CheckRecord(f"{name}_lhs", st, me, EQ_TOL, inputs))
    rhs, rhs_s = _det_at(rap, params, rap.L - 1)
    rhs_red = 1.0 if red is None else _zdet(red, params)
    rhs_red_s = 1.0 if red is None else determinant_scale(red, params)
    st, me = compare(rhs, pref * rhs_red, EQ_TOL, rhs_s, abs(pref) * rhs_red_s)
    recs.append(CheckRecord(f"{name}_rhs", st, me, EQ_TOL, inputs))
    return recs


def check_corner_left(params, L, rng):
    rap = sample_rapidities(rng, L, params)
    rap = _with_x(rap, L - 1, rap.y[0] + params.n - 2)
    return _corner("corner_left", z_bruteforce_corner_left, rap, params)


def check_corner_right(params, L, rng):
    rap = sample_rapidities(rng, L, params)
    rap = _with_x(rap, L - 1, rap.y[L - 1])
    return _corner("corner_right", z_bruteforce_corner_right, rap, params)


def check_initial_condition(params, L, rng, count: int = 20):
    res, us = [], []
    for _ in range(count):
        rap = sample_rapidities(rng, 1, params)
        u = rap.u(0, 0)
        us.append(u)
        a = _zdet(rap, params)
        b = w_cplus(u, params)
        res.append(compare(a, b, INIT_TOL, determinant_scale(rap, params), z_bruteforce_scale(rap, params)))
    status, measured = _merge(res)
    return [CheckRecord("initial_condition", status, measured, INIT_TOL, {"u": us})]


def check_equality(params, L, rng, count: int = 10):
    raps = [sample_rapidities(rng, L, params) for _ in range(count)]
    status, measured = _merge([_equality(r, params) for r in raps])
    return [CheckRecord("equality", status, measured, EQ_TOL, {"sets": [_rap_inputs(r) for r in raps]})]


SUITE: tuple[tuple[str, Callable], ...] = (
    ("ybe", check_ybe),
    ("symmetry", check_symmetry),
    ("d_symmetry", check_d_symmetry),
    ("row_coincidence", check_row_coincidence),
    ("pole_cancellation", check_pole_cancellation),
    ("laurent_span", check_laurent_span),
    ("corner_left", check_corner_left),
    ("corner_right", check_corner_right),
    ("initial_condition", check_initial_condition),
    ("equality", check_equality),
)


def run_proof_suite(
    params: ModelParams,
    L: int,
    seed: int = 0,
    workers: int = 1,
    deterministic: bool = False,
    budget: int | None = None,
) -> VerificationReport:
    """Run every battery in :data:`SUITE` order and append an ``aggregate`` record.

    Battery ``k`` draws its rapidities from ``default_rng([seed, k])``, so
    results do not depend on ``workers``.  With ``deterministic=True``
    ``elapsed_ms`` is reported as 0 and the report is byte-reproducible.
    """
    _check_budget(params.n, L, budget)
    t0 = time.perf_counter()

    def task(k, fn):
        return lambda: fn(params, L, np.random.default_rng([seed, k]))

    chunks = _run_tasks([task(k, fn) for k, (_, fn) in enumerate(SUITE)], workers)
    checks = [rec for chunk in chunks for rec in chunk]
    failed = [c.name for c in checks if c.status == "fail"]
    checks.append(CheckRecord("aggregate", "fail" if failed else "pass", len(failed), 0, {}, ",".join(failed)))
    elapsed = 0.0 if deterministic else round((time.perf_counter() - t0) * 1e3, 3)
    campaign = f"proof-suite n={params.n} {'m=' + str(params.m) if params.is_discrete else 'lambda=' + fmt(params.lam)} L={L}"
    return VerificationReport(campaign, _params_dict(params, L), seed, checks, elapsed)


# ---------------------------------------------------------------- lambda sweep


def discrete_points(n: int, lo: float, hi: float) -> list:
    """Discrete crossing values ``m pi / (2(n-3))`` in ``[lo, hi]`` (none for n = 3)."""
    if n < 4:
        return []
    step = math.pi / (2 * (n - 3))
    return [ModelParams.discrete(n, m) for m in range(math.ceil(lo / step), math.floor(hi / step) + 1) if m != 0]


def _sweep_point(params: ModelParams, rap: Rapidities) -> CheckRecord:
    name = f"lambda={fmt(params.lam)}"
    inputs = {"lambda": params.lam, "m": params.m}
    expected_equal = params.formula_applies
    try:
        status, measured = _equality(rap, params)
    except PoleError as e:
        return CheckRecord(name, "skipped", None, EQ_TOL, inputs, f"pole: {e}")
    if expected_equal:
        return CheckRecord(name, status, measured, EQ_TOL, inputs, "expected equal")
    if measured > OFF_CONDITION_TOL:
        status = "pass"
    elif measured < EQ_TOL:
        status = "fail"
    else:
        status = "indeterminate"
    return CheckRecord(name, status, measured, OFF_CONDITION_TOL, inputs, "expected unequal")


def lambda_sweep(
    n: int,
    L: int,
    grid,
    seed: int = 0,
    workers: int = 1,
    deterministic: bool = False,
    budget: int | None = None,
) -> VerificationReport:
    """Relative difference between the two sides across crossing parameters.

    The discrete values inside the grid range are added.  Grid points
    within 1e-12 of a discrete value are replaced by it.  Points with
    ``lam <= 0``, or where a bracket of ``M`` or ``D`` vanishes at the
    sampled rapidities, are recorded as skipped.  For n = 3 every point is
    expected to agree.
    """
    _check_budget(n, L, budget)
    t0 = time.perf_counter()
    grid = [float(g) for g in grid]
    pts: list[ModelParams] = []
    if grid:
        extra = discrete_points(n, min(grid), max(grid))
        taken = [p.lam for p in extra]
        for lam in grid:
            if not any(abs(lam - t) < 1e-12 for t in taken):
                pts.append(ModelParams.continuous(n, lam))
        pts.extend(extra)
        pts.sort(key=lambda p: p.lam)
    rap = Rapidities.random(L, np.random.default_rng(seed))

    def task(p):
        if not p.lam > 0:
            return lambda: CheckRecord(f"lambda={fmt(p.lam)}", "skipped", None, EQ_TOL, {"lambda": p.lam, "m": None}, "lam <= 0")
        return lambda: _sweep_point(p, rap)

    checks = _run_tasks([task(p) for p in pts], workers)
    elapsed = 0.0 if deterministic else round((time.perf_counter() - t0) * 1e3, 3)
    params = {"n": n, "m": None, "lambda": [min(grid), max(grid)] if grid else None, "L": L}
    return VerificationReport(f"lambda-sweep n={n} L={L}", params, seed, checks, elapsed)


def sweep_rows(report: VerificationReport) -> str:
    """CSV of ``lambda, rel_diff, status, m`` for a sweep report."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "rel_diff", "status", "m"])
    for c in report.checks:
        w.writerow([fmt(c.inputs["lambda"]), fmt(c.measured), c.status, "" if c.inputs["m"] is None else c.inputs["m"]])
    return buf.getvalue()
