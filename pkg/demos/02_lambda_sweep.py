"""Where in lambda does the determinant formula hold?  A sweep for n = 4 and n = 5.

Run: python demos/02_lambda_sweep.py
"""

import math

import numpy as np

from dwsolve import lambda_sweep

for n in (3, 4, 5):
    rep = lambda_sweep(n, 2, np.linspace(0, math.pi, 61)[1:-1], seed=11)
    on = [c for c in rep.checks if c.inputs["m"] is not None]
    off = [c.measured for c in rep.checks if c.inputs["m"] is None and c.measured is not None]
    print(f"n={n}: {len(rep.checks)} points")
    for c in on:
        print(f"   discrete m={c.inputs['m']}: lam={c.inputs['lambda']:.6f}  {c.status:10s} measured {c.measured:.1e}")
    print(f"   off-grid relative difference: min {min(off):.2e}, median {np.median(off):.2e}")

print("\nn=3 agrees at every lambda; n>=4 agrees only at m*pi/(2(n-3)).")
