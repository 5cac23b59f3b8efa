"""The full battery for one parameter set, printed as a table.

Run: python demos/04_proof_suite.py [n] [m] [L]
"""

import sys

from dwsolve import ModelParams, run_proof_suite

n, m, L = (int(a) for a in (sys.argv[1:] + ["5", "1", "3"][len(sys.argv) - 1 :])[:3])
rep = run_proof_suite(ModelParams.discrete(n, m), L, seed=42)
print(rep.campaign)
for c in rep.checks:
    val = "" if c.measured is None else f"{c.measured:.3g}"
    print(f"  {c.name:26s} {c.status:11s} {val:>10s}  {c.detail}")
print("passed" if rep.passed else "FAILED")
