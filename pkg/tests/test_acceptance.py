"""Acceptance criteria, one test each.  Every test records a single PASS/FAIL line.

"degenerate" below means both sides vanish identically: at ``[2] = 0``
(every discrete point of n = 4, and (n, m) = (5, 2), (6, 3)) all
colour-changing weights are 0, so the lattice sum is exactly 0.  The
determinant is then 0 up to round-off; each side is below 1e-12 of its
own magnitude scale.  Where a criterion's parameter set is degenerate, a
non-degenerate companion run is reported in the same line.
"""

import math

import numpy as np
import pytest

from dwsolve.cli import main
from dwsolve.determinant import (
    determinant_scale,
    richardson,
    row_coincidence_error,
    z_determinant,
    z_homogeneous,
)
from dwsolve.errors import VanishingFunctionError
from dwsolve.harness import (
    EQ_TOL,
    _corner,
    check_initial_condition,
    compare,
    lambda_sweep,
    pole_variation,
    rel_diff,
    sample_rapidities,
)
from dwsolve.lattice import (
    Rapidities,
    z_bruteforce,
    z_bruteforce_corner_left,
    z_bruteforce_corner_right,
    z_bruteforce_scale,
    z_multiplicative_slice,
)
from dwsolve.laurent import extract_laurent_span
from dwsolve.model import ModelParams, ybe_residual


def _tally(statuses):
    return {s: statuses.count(s) for s in sorted(set(statuses))}


def test_criterion_01_ybe(criterion):
    rng = np.random.default_rng(1)
    worst = 0.0
    for n in (3, 4, 5, 6):
        sets = [ModelParams.continuous(n, 0.43)]
        sets.append(ModelParams.discrete(n, 1) if n > 3 else ModelParams.continuous(3, 0.37))
        for p in sets:
            for _ in range(100):
                u, v = rng.uniform(-1, 1, 2)
                worst = max(worst, ybe_residual(u, v, p))
    ok = worst < 1e-10
    criterion(1, ok, f"YBE max residual {worst:.3g} < 1e-10 (n=3..6, 100 pairs, discrete + generic lambda)")
    assert ok


def test_criterion_02_equality(criterion):
    statuses, worst = [], 0.0
    for n in (4, 5):
        for m in (1, 2):
            p = ModelParams.discrete(n, m)
            for L in (1, 2, 3):
                rng = np.random.default_rng([2, n, m, L])
                for _ in range(10):
                    rap = sample_rapidities(rng, L, p)
                    st, me = compare(
                        z_bruteforce(rap, p), z_determinant(rap, p), EQ_TOL,
                        z_bruteforce_scale(rap, p), determinant_scale(rap, p),
                    )
                    statuses.append(st)
                    if st == "pass":
                        worst = max(worst, me)
    ok = "fail" not in statuses
    criterion(2, ok, f"det == lattice sum, (n,m,L) in {{4,5}}x{{1,2}}x{{1,2,3}}: {_tally(statuses)}; max rel diff (non-degenerate) {worst:.3g}")
    assert ok


def test_criterion_03_n3_all_lambda(criterion):
    worst = 0.0
    rng = np.random.default_rng(3)
    lams = np.linspace(0.13, 2.9, 10)
    for lam in lams:
        p = ModelParams.continuous(3, float(lam))
        for L in (1, 2, 3):
            for _ in range(3):
                rap = sample_rapidities(rng, L, p)
                worst = max(worst, rel_diff(z_bruteforce(rap, p), z_determinant(rap, p)))
    ok = worst < 1e-9
    criterion(3, ok, f"n=3 equality at 10 lambda in [0.13, 2.9], L=1..3: max rel diff {worst:.3g}")
    assert ok


def test_criterion_04_negative_control(criterion):
    rng = np.random.default_rng(4)
    low = math.inf
    for lam in (0.3, 0.7, 1.1):
        p = ModelParams.continuous(4, lam)
        for _ in range(10):
            rap = sample_rapidities(rng, 2, p)
            low = min(low, rel_diff(z_bruteforce(rap, p), z_determinant(rap, p, warn=False)))
    grid = np.linspace(0, math.pi, 202)[1:-1]
    rep = lambda_sweep(4, 2, grid, seed=4)
    dips = [c for c in rep.checks if c.measured is not None and c.measured < 1e-9]
    discrete = [c for c in rep.checks if c.inputs["m"] is not None]
    dips_ok = all(c.inputs["m"] is not None for c in dips) and all(c.measured < 1e-9 for c in discrete)
    off = min(c.measured for c in rep.checks if c.inputs["m"] is None and c.measured is not None)
    ok = low > 1e-3 and dips_ok and bool(discrete)
    criterion(
        4, ok,
        f"n=4 off-condition min rel diff {low:.3g} > 1e-3; 200-point sweep: {len(dips)} dip(s) < 1e-9, "
        f"all at m*pi/2 (m={[c.inputs['m'] for c in dips]}), min off-grid diff {off:.3g}",
    )
    assert ok


def test_criterion_05_corners(criterion):
    statuses = []
    for n in (4, 5):
        p = ModelParams.discrete(n, 1)
        for L in (2, 3):
            rng = np.random.default_rng([5, n, L])
            for corner, shift in ((z_bruteforce_corner_left, "left"), (z_bruteforce_corner_right, "right")):
                rap = sample_rapidities(rng, L, p)
                x = list(rap.x)
                x[-1] = rap.y[0] + n - 2 if shift == "left" else rap.y[-1]
                for rec in _corner(shift, corner, rap.replace(x=x), p):
                    statuses.append((n, rec.status, rec.measured))
    ok = all(s != "fail" for _, s, _ in statuses)
    n5 = max(m for n, s, m in statuses if n == 5)
    criterion(5, ok, f"corner recursions, both sides, L=2,3: n=4 {_tally([s for n, s, _ in statuses if n == 4])}, n=5 {_tally([s for n, s, _ in statuses if n == 5])} (max rel diff {n5:.3g})")
    assert ok


def test_criterion_06_initial_condition(criterion):
    statuses, worst = [], 0.0
    for n in (4, 5, 6):
        for m in (1, 2, 3):
            p = ModelParams.discrete(n, m)
            (rec,) = check_initial_condition(p, 1, np.random.default_rng([6, n, m]), count=20)
            statuses.append(rec.status)
            if rec.status == "pass":
                worst = max(worst, rec.measured)
    ok = "fail" not in statuses
    criterion(6, ok, f"L=1 det == w_c+ at 20 u, (n,m) in {{4,5,6}}x{{1,2,3}}: {_tally(statuses)}; max rel diff {worst:.3g}")
    assert ok


def _approach(p, rap, shift):
    vals, scales = [], []
    for e in (1e-3, 1e-4, 1e-5):
        r = rap.replace(x=(rap.x[0], rap.x[0] - shift + e))
        vals.append(z_determinant(r, p))
        scales.append(determinant_scale(r, p))
    return vals, scales


def test_criterion_07_pole_cancellation(criterion):
    statuses, plain, rows = [], 0.0, 0.0
    for n in (4, 5):
        for m in (1, 2):
            p = ModelParams.discrete(n, m)
            rap = sample_rapidities(np.random.default_rng([7, n, m]), 2, p)
            for which, shift in (("upper", n - 2), ("lower", n - 4)):
                vals, scales = _approach(p, rap, shift)
                if all(abs(v) <= 1e-12 * sc for v, sc in zip(vals, scales)):
                    statuses.append("degenerate")
                else:
                    pv = pole_variation(vals, 0.0)
                    plain = max(plain, pv)
                    statuses.append("pass" if pv < 1e-2 else "fail")
                rows = max(rows, row_coincidence_error(rap.replace(x=(rap.x[0], rap.x[0] - shift)), p, 0, 1, which))
    # wider exploration, reported but not asserted: the plain metric also trips where Z itself is small
    explored = []
    for n, m in ((6, 1), (6, 2), (7, 1), (7, 2)):
        p = ModelParams.discrete(n, m)
        rap = sample_rapidities(np.random.default_rng([7, n, m]), 2, p)
        for which, shift in (("upper", n - 2), ("lower", n - 4)):
            vals, _ = _approach(p, rap, shift)
            at = rap.replace(x=(rap.x[0], rap.x[0] - shift))
            pv = pole_variation(vals, 0.0)
            if pv > 1e-2:
                explored.append(f"n={n},m={m},{which}: {pv:.2g} with |Z|/scale={abs(z_bruteforce(at, p)) / z_bruteforce_scale(at, p):.1g}")
    ok = "fail" not in statuses and rows < 1e-9
    criterion(
        7, ok,
        f"(n,m) in {{4,5}}x{{1,2}}: approach eps=1e-3..1e-5 {_tally(statuses)}, max rel variation {plain:.3g} < 1e-2; "
        f"row coincidence with (-1)^m err {rows:.3g}; exploratory n=6,7 plain variation > 1e-2 at "
        f"[{'; '.join(explored) or 'none'}]",
    )
    assert ok


def _span(p, L, seed):
    rap = sample_rapidities(np.random.default_rng([8, seed, L]), L, p)
    return extract_laurent_span(lambda t: z_multiplicative_slice(rap, ("x", 0), t, p), 8 * L + 8).span_x


@pytest.mark.xfail(strict=True, reason="Z is identically 0 at n=4 ([2]=0 at every discrete point): no Laurent span exists")
def test_criterion_08_degree(criterion):
    companion = {L: sorted({_span(ModelParams.discrete(5, 1), L, s) for s in (1, 2, 3)}) for L in (2, 3)}
    measured = {}
    for L in (2, 3):
        spans = []
        for seed in (1, 2, 3):
            try:
                spans.append(_span(ModelParams.discrete(4, 1), L, seed))
            except VanishingFunctionError:
                spans.append(None)
        measured[L] = spans
    ok = all(s == 2 * L - 2 for L, ss in measured.items() for s in ss)
    criterion(
        8, ok,
        f"span in X at n=4, m=1: {measured} (None = function vanishes identically); "
        f"companion n=5, m=1 over 3 seeds: {companion} == 2L-2",
    )
    assert ok


def test_criterion_09_homogeneous(criterion):
    x, y = 0.31, 0.52
    hs = (1e-2, 5e-3, 2.5e-3)
    lines, ok = [], True
    for p in (ModelParams.discrete(4, 1), ModelParams.discrete(5, 1)):
        hom = []
        for L in (1, 2, 3):
            zh = z_homogeneous(x, y, L, p)
            zb = z_bruteforce(Rapidities((x,) * L, (y,) * L), p)
            d = rel_diff(zh, zb)
            ok &= d < 1e-8
            hom.append(d)
        vals = [z_determinant(Rapidities((x, x + h), (y, y + h)), p) for h in hs]
        scale = max(determinant_scale(Rapidities((x, x + h), (y, y + h)), p) for h in hs)
        rich = richardson(hs, vals)
        st, me = compare(rich, z_homogeneous(x, y, 2, p), 1e-4, scale, z_bruteforce_scale(Rapidities((x,) * 2, (y,) * 2), p))
        ok &= st != "fail"
        lines.append(f"n={p.n}: hom-vs-lattice rel diff L=1..3 {[f'{d:.2g}' for d in hom]}, Richardson L=2 {st} {me:.2g}")
    criterion(9, ok, "; ".join(lines) + " (n=4 values are exactly 0 on both sides)")
    assert ok


def test_criterion_10_reproducible(criterion, tmp_path):
    same = []
    for args in (["--n", "4", "--m", "1", "--L", "2", "--seed", "42"], ["--n", "5", "--m", "1", "--L", "3", "--seed", "7"]):
        outs = []
        for w in ("1", "8"):
            out = tmp_path / f"r{w}.json"
            main(["verify", *args, "--deterministic", "--workers", w, "--out", str(out)])
            outs.append(out.read_bytes())
        same.append(outs[0] == outs[1])
    ok = all(same)
    criterion(10, ok, f"verify --deterministic byte-identical for 1 vs 8 workers: {same}")
    assert ok
