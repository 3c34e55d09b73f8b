"""Reducing horocycle points into the fundamental domain.

The points (k + i)/n sit at height 1/n, far below the fundamental domain.
Reduction lifts each to height at least sqrt(3)/2; the sample set P(n) then
spreads over the modular surface as n grows.

Run:  python demos/03_reduction_and_horocycles.py
"""

import numpy as np

from horocycles.arith import coprime_residues
from horocycles.modsurf import UpperHalfPoint, apply_moebius, reduce_rational, reduce_to_fundamental_domain

z = UpperHalfPoint(0.5, 0.5)
res = reduce_to_fundamental_domain(z)
print(f"{z.z} reduces to {res.reduced.z:.12f} with gamma {res.gamma.rows()}")
print(f"|cz + d|^2 = {abs(res.automorphy) ** 2:.12f}  y / y' = {z.y / res.reduced.y:.12f}")
print(f"gamma . z  = {apply_moebius(res.gamma, z).z:.12f}")

for n in (7, 101, 10007):
    k = np.asarray(coprime_residues(n))
    xr, yr, c, d = reduce_rational(k, n)
    hist, _ = np.histogram(yr, bins=[0.866, 1.0, 1.5, 2.0, 5.0, np.inf])
    print(f"\nn = {n}: {k.size} points, reduced heights in [{yr.min():.3f}, {yr.max():.1f}]")
    print("  counts by height band [0.87,1) [1,1.5) [1.5,2) [2,5) [5,inf):", hist.tolist())
