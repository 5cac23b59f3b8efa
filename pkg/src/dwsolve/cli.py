"""Command line: ``dwsolve {z,verify,sweep,dump-r}``.

Exit codes: 0 success, 2 mismatch or failed checks, 1 runtime error,
64 usage error, 65 state budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import BudgetExceeded, DWSolveError
from .harness import (
    EQ_TOL,
    _jsonable,
    compare,
    fmt,
    lambda_sweep,
    run_proof_suite,
    sweep_rows,
)
from .lattice import Rapidities, z_bruteforce, z_bruteforce_scale
from .determinant import determinant_scale, z_determinant
from .model import ModelParams, assemble_r_matrix

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_complex(token: str) -> complex | float:
    """``0.3``, ``0.3+0.1i``, ``-2i`` and the like."""
    t = token.strip().replace(" ", "").replace("i", "j")
    try:
        z = complex(t)
    except ValueError:
        raise UsageError(f"bad number {token!r}") from None
    return z.real if z.imag == 0 else z


def parse_list(text: str) -> tuple:
    return tuple(parse_complex(t) for t in text.split(",") if t.strip())


def parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("grid must be start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if count < 0:
        raise UsageError("grid count must be >= 0")
    return np.linspace(start, stop, count)


def resolve_params(args) -> ModelParams:
    n = args.n
    if n < 3:
        raise UsageError("--n must be >= 3")
    if args.m is not None and args.lam is not None:
        raise UsageError("give only one of --m and --lambda")
    if n == 3:
        if args.m is not None:
            raise UsageError("--m is undefined for n = 3; use --lambda")
        if args.lam is None:
            raise UsageError("n = 3 needs --lambda")
        return ModelParams.continuous(3, args.lam)
    if args.m is not None:
        if args.m == 0:
            raise UsageError("--m must be nonzero")
        return ModelParams.discrete(n, args.m)
    if args.lam is None:
        raise UsageError("n >= 4 needs --m or --lambda")
    if args.force_continuous:
        return ModelParams.continuous(n, args.lam)
    p = ModelParams.from_lambda(n, args.lam)
    if not p.is_discrete:
        raise UsageError(f"lambda={args.lam} is not m*pi/(2(n-3)); pass --force-continuous to use it anyway")
    return p


def resolve_rapidities(args, rng) -> Rapidities:
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise UsageError("--x and --y go together")
        x, y = parse_list(args.x), parse_list(args.y)
        if len(x) != len(y):
            raise UsageError("--x and --y need the same length")
        if args.L is not None and args.L != len(x):
            raise UsageError("--L disagrees with the rapidity lists")
        return Rapidities(x, y)
    return Rapidities.random(args.L or 2, rng)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_z(args) -> int:
    params = resolve_params(args)
    rap = resolve_rapidities(args, np.random.default_rng(args.seed))
    tol = args.tol if args.tol is not None else EQ_TOL
    zb = z_bruteforce(rap, params)
    zd = z_determinant(rap, params, warn=False)
    status, measured = compare(zb, zd, tol, z_bruteforce_scale(rap, params), determinant_scale(rap, params))
    rec = {
        "params": {"n": params.n, "m": params.m, "lambda": params.lam, "L": rap.L},
        "seed": args.seed,
        "x": list(rap.x),
        "y": list(rap.y),
        "z_bruteforce": zb,
        "z_determinant": zd,
        "rel_diff": measured,
        "status": status,
        "tolerance": tol,
        "formula_applies": params.formula_applies,
    }
    if args.format == "csv":
        head = "n,m,lambda,L,seed,z_bruteforce,z_determinant,rel_diff,status\n"
        row = [params.n, "" if params.m is None else params.m, fmt(params.lam), rap.L, args.seed, fmt(zb), fmt(zd), fmt(measured), status]
        _emit(head + ",".join(map(str, row)) + "\n", args.out)
    else:
        _emit(json.dumps(_jsonable(rec), indent=2) + "\n", args.out)
    return EXIT_MISMATCH if status == "fail" else EXIT_OK


def cmd_verify(args) -> int:
    params = resolve_params(args)
    report = run_proof_suite(params, args.L or 2, seed=args.seed, workers=args.workers, deterministic=args.deterministic)
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_sweep(args) -> int:
    if args.n < 3:
        raise UsageError("--n must be >= 3")
    grid = parse_grid(args.grid)
    report = lambda_sweep(args.n, args.L or 2, grid, seed=args.seed, workers=args.workers, deterministic=args.deterministic)
    _emit(report.to_json() if args.format == "json" else sweep_rows(report), args.out)
    return EXIT_OK


def cmd_dump_r(args) -> int:
    params = resolve_params(args)
    u = parse_complex(args.u)
    R = assemble_r_matrix(u, params)
    n = params.n
    entries = []
    for row, col in zip(*np.nonzero(R)):
        sigma, nu = divmod(int(row), n)
        rho, mu = divmod(int(col), n)
        entries.append({
            "row": int(row), "col": int(col),
            "rho": rho + 1, "sigma": sigma + 1, "mu": mu + 1, "nu": nu + 1,
            "value": complex(R[row, col]),
        })
    doc = {
        "n": n,
        "m": params.m,
        "lambda": params.lam,
        "u": u,
        "shape": [n * n, n * n],
        "convention": "row = (sigma-1)*n + (nu-1) (outgoing right, top); col = (rho-1)*n + (mu-1) (incoming left, bottom)",
        "nonzero": len(entries),
        "entries": entries,
    }
    _emit(json.dumps(_jsonable(doc), indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, required=True)
    common.add_argument("--m", type=int)
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--force-continuous", action="store_true")
    common.add_argument("--L", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--deterministic", action="store_true")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--tol", type=float)

    p = _Parser(prog="dwsolve", description="so(n) domain-wall partition functions: lattice sum vs determinant.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    z = sub.add_parser("z", parents=[common], help="evaluate both sides at one rapidity set")
    z.add_argument("--x", help="comma-separated rapidities, a+bi allowed")
    z.add_argument("--y")
    z.add_argument("--random", action="store_true", help="draw rapidities from --seed (the default)")
    z.set_defaults(func=cmd_z)

    v = sub.add_parser("verify", parents=[common], help="run the proof suite")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="relative difference across a lambda grid")
    s.add_argument("--grid", default="0:3.141592653589793:200", help="start:stop:count")
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("dump-r", parents=[common], help="dump the R-matrix at rapidity u")
    d.add_argument("--u", required=True)
    d.set_defaults(func=cmd_dump_r)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    if args.L is not None and args.L < 1:
        parser.error("--L must be >= 1")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"dwsolve: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"dwsolve: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (DWSolveError, ValueError, ArithmeticError, OSError) as e:
        print(f"dwsolve: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
