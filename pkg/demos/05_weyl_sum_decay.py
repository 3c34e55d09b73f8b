"""Decay of twisted Weyl sums along P(n).

For the discriminant lift the sums fall like n^(-1/2). For a unitary
Eisenstein series the constant term contributes n^(-1/2) (n^(-it) + rho n^(it))
with |rho| = 1, so n^(1/2) |S_n| oscillates like |sin(t log n + const)|:
the rate is still n^(-1/2) but there is no lower envelope.

For prime n = p the sum over all k mod p keeps only the constant term and
the modes divisible by p, which gives an exact decomposition of S_p; the
unit tests check it. Both pieces are of size p^(-1/2) and they interfere.

Run:  python demos/05_weyl_sum_decay.py
"""

import math

from horocycles.arith import primes_in_range
from horocycles.equidist import decay_fit, weyl_sum, weyl_sums
from horocycles.forms import EisensteinLinePoint, delta_lift

primes = primes_in_range(101, 2003)
delta = delta_lift()
for l in (0, 1, 5):
    fit = decay_fit((p, weyl_sum(delta, p, l)) for p in primes)
    print(f"discriminant, l = {l}: slope {fit.slope:.3f} +- {fit.slope_stderr:.3f}")

for t in (1.0, 5.0):
    form = EisensteinLinePoint(t)
    rows = [(p, weyl_sums(form, p, [0])[0]) for p in primes]
    fit = decay_fit(rows)
    scaled = [math.sqrt(p) * abs(v) for p, v in rows]
    print(f"\nEisenstein t = {t}: slope {fit.slope:.3f}, n^(1/2)|S| ranges over [{min(scaled):.4f}, {max(scaled):.3f}]")
    for p, v in rows[:: len(rows) // 8]:
        print(f"  n = {p:4d}  S = {v.real: .5f}{v.imag:+.5f}i   n^(1/2)|S| = {math.sqrt(p) * abs(v):.4f}")
