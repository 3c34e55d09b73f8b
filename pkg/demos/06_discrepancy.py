"""Joint equidistribution: pairing a torus weight with a surface function.

With f1(x) = 1 + cos(2 pi x) and f2 = 1 + (discriminant lift), the
discrepancy is assembled from Ramanujan sums and Weyl sums and checked
against the direct double sum over P(n).

Run:  python demos/06_discrepancy.py
"""

from horocycles.arith import primes_in_range
from horocycles.equidist import SpectralSynthesis, TrigPolynomial, decay_fit, discrepancy, discrepancy_direct, envelope_check
from horocycles.forms import delta_lift

f1 = TrigPolynomial({0: 1.0, 1: 0.5, -1: 0.5})
f2 = SpectralSynthesis(1.0, ((1.0, delta_lift()),))

for n in (101, 1009, 2003):
    a = discrepancy(f1, f2, n)
    b = discrepancy_direct(f1, f2, n)
    print(f"n = {n}: assembled {a.real: .3e}, direct {b.real: .3e}, difference {abs(a - b):.1e}")

samples = [(p, discrepancy(f1, f2, p)) for p in primes_in_range(101, 2003)]
fit = decay_fit(samples)
rep = envelope_check(samples, -0.3906)
print(f"\nslope {fit.slope:.3f}; largest |D| n^0.3906 = {rep.max_ratio:.3e} at n = {rep.argmax_n}")
# at these n the Ramanujan term -1/(n-1) dominates the cusp-form contribution
