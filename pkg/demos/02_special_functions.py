"""Zeta, the completed xi function and K-Bessel functions.

These are the kernels behind every Eisenstein evaluation: 1/xi(2s) scales
the Fourier modes and K_{s-1/2} gives their shape.

Run:  python demos/02_special_functions.py
"""

import math

import numpy as np

from horocycles.specfun import bessel_k, completed_xi, riemann_zeta

print(f"zeta(2) - pi^2/6        = {abs(riemann_zeta(2) - math.pi**2 / 6):.1e}")
print(f"|zeta(1/2 + 14.1347i)|  = {abs(riemann_zeta(0.5 + 14.134725141734693j)):.1e}   (first zero)")

s = 0.3 + 4j
print(f"|xi(s) - xi(1 - s)|     = {abs(completed_xi(s) - completed_xi(1 - s)):.1e}   at s = {s}")

# |xi(2it) / xi(1 + 2it)| = 1: the constant term of a unitary Eisenstein series
for t in (1.0, 5.0, 20.0):
    ratio = completed_xi(2j * t) / completed_xi(1 + 2j * t)
    print(f"t = {t:4.1f}: scattering ratio {ratio:.6f}, modulus {abs(ratio):.15f}")

xs = np.array([0.1, 1.0, 10.0, 50.0])
err = np.abs(bessel_k(0.5, xs) - np.sqrt(np.pi / (2 * xs)) * np.exp(-xs))
print(f"\nK_1/2 against its closed form: max error {err.max():.1e}")

# imaginary order: oscillates for x < r, then decays like exp(-x)
r = 9.53
for x in (0.5, 2.0, 5.0, 9.0, 15.0, 30.0):
    print(f"x = {x:5.1f}   e^(pi r/2) K_ir(x) = {bessel_k(1j * r, x) * math.exp(math.pi * r / 2): .6e}")
