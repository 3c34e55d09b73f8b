"""Ramanujan sums two ways.

r_n(m) is the average of e(a m / n) over the primitive residues a mod n.
It has the closed form mu(n/g) / phi(n/g) with g = gcd(n, m), which is how
torus averages over P(n) are computed without touching the points at all.

Run:  python demos/01_ramanujan_sums.py
"""

from horocycles.arith import euler_phi, mobius, ramanujan_sum_closed, ramanujan_sum_direct

print(" n   m   closed     direct")
for n, m in [(5, 1), (4, 2), (12, 3), (12, 4), (30, 1), (30, 6), (7, 0)]:
    print(f"{n:2d} {m:3d}  {ramanujan_sum_closed(n, m): .6f}  {ramanujan_sum_direct(n, m).real: .6f}")

worst = max(abs(ramanujan_sum_closed(n, m) - ramanujan_sum_direct(n, m)) for n in range(1, 101) for m in range(-100, 101))
print(f"\nworst disagreement over n <= 100, |m| <= 100: {worst:.1e}")

# for squarefree n the unit twist is mu(n)/phi(n), so averages of e(x) decay like 1/n
for n in (101, 1001, 10001):
    print(f"r_{n}(1) = {ramanujan_sum_closed(n, 1): .3e}   mu/phi = {mobius(n) / euler_phi(n): .3e}")
