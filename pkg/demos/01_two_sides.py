"""Lattice sum against the block determinant, at a few crossing parameters.

Run: python demos/01_two_sides.py
"""

import numpy as np

from dwsolve import ModelParams, Rapidities, z_bruteforce, z_determinant
from dwsolve.harness import rel_diff

rng = np.random.default_rng(0)
rap = Rapidities.random(3, rng)
print("x =", np.round(rap.x, 4), " y =", np.round(rap.y, 4))

cases = [
    ModelParams.continuous(3, 0.37),
    ModelParams.discrete(5, 1),
    ModelParams.discrete(6, 2),
    ModelParams.discrete(7, 3),
]
print(f"\n{'params':28s} {'lattice sum':>22s} {'determinant':>22s} {'rel diff':>9s}")
for p in cases:
    a, b = z_bruteforce(rap, p), z_determinant(rap, p)
    print(f"{str(p):28s} {a.real:22.15g} {b.real:22.15g} {rel_diff(a, b):9.1e}")

# The bare (N/D) det M differs from the lattice sum by eps**L.
p = ModelParams.discrete(6, 2)
bare = z_determinant(rap, p, signed=False)
print(f"\nn=6, m=2: bare formula / lattice sum = {(bare / z_bruteforce(rap, p)).real:+.12f}  (eps = {p.dw_sign})")

# Off the discrete values the two sides part ways.
p = ModelParams.continuous(5, 0.6)
a, b = z_bruteforce(rap, p), z_determinant(rap, p, warn=False)
print(f"n=5, lam=0.6 (not discrete): rel diff {rel_diff(a, b):.3f}")

# At n = 4 every discrete point has [2] = 0 and both sides vanish.
p = ModelParams.discrete(4, 1)
print(f"n=4, m=1: lattice sum {z_bruteforce(rap, p)}, determinant {abs(z_determinant(rap, p)):.1e} (round-off)")
