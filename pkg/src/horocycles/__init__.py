"""Equidistribution of primitive rational points on expanding horocycles.

Numerical twisted Weyl sums over P(n) = {(k/n, (k + i)/n) : (k, n) = 1}
against holomorphic cusp forms, Maass forms and unitary Eisenstein series
for SL2(Z), with the Ramanujan-sum machinery that assembles them.
"""

__version__ = "0.1.0"

from .arith import (
    coprime_residues,
    divisor_sigma,
    euler_phi,
    mobius,
    ramanujan_sum_closed,
    ramanujan_sum_direct,
)
from .equidist import (
    DecayFitResult,
    SpectralSynthesis,
    TrigPolynomial,
    decay_fit,
    discrepancy,
    discrepancy_direct,
    eisenstein_constant_term_prediction,
    envelope_check,
    totient_average,
    weyl_sum,
    weyl_sums,
)
from .forms import (
    EisensteinLinePoint,
    HolomorphicLift,
    MaassForm,
    delta_lift,
    eisenstein_direct_oracle,
    evaluate,
    evaluate_eisenstein,
    evaluate_holomorphic_lift,
    evaluate_maass,
    load_maass_data,
    tau_coefficients,
)
from .modsurf import (
    HorocycleSample,
    ReductionResult,
    UnimodularMatrix,
    UpperHalfPoint,
    apply_moebius,
    horocycle_points,
    reduce_to_fundamental_domain,
)
from .specfun import bessel_k, completed_xi, complex_exponential, gamma_r, riemann_zeta
