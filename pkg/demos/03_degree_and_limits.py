"""Degree in one rapidity, and the homogeneous limit.

Run: python demos/03_degree_and_limits.py
"""

import numpy as np

from dwsolve import ModelParams, Rapidities, extract_laurent_span, z_bruteforce, z_determinant, z_homogeneous
from dwsolve.determinant import richardson
from dwsolve.lattice import z_multiplicative_slice

p = ModelParams.discrete(5, 1)
rng = np.random.default_rng(2)

print("Laurent span of Z in X = k**x_1 (sampled in t = X**(1/2) on the unit circle)")
for L in (1, 2, 3, 4):
    rap = Rapidities.random(L, rng)
    sp = extract_laurent_span(lambda t: z_multiplicative_slice(rap, ("x", 0), t, p), 8 * L + 8)
    print(f"  L={L}: t exponents {sp.min_exp:+d}..{sp.max_exp:+d}, span in X {sp.span_x:g} (2L-2 = {2 * L - 2})")

print("\nHomogeneous limit x_i = 0.31, y_j = 0.52")
x, y = 0.31, 0.52
for L in (1, 2, 3, 4):
    zh = z_homogeneous(x, y, L, p)
    zb = z_bruteforce(Rapidities((x,) * L, (y,) * L), p)
    print(f"  L={L}: jets {zh.real:+.15e}   lattice {zb.real:+.15e}")

hs = (1e-2, 5e-3, 2.5e-3)
vals = [z_determinant(Rapidities((x, x + h), (y, y + h)), p) for h in hs]
print(f"\nL=2 Richardson from h={hs}: {richardson(hs, vals).real:+.12e}")
