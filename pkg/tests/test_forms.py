import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horocycles.arith import divisors, factorize
from horocycles.cli import random_unimodular
from horocycles.forms import (
    EISENSTEIN_KAPPA,
    EisensteinLinePoint,
    HolomorphicLift,
    InsufficientCoefficients,
    InvariantViolation,
    MaassForm,
    MaassParseError,
    calibrate_kappa,
    delta_lift,
    eisenstein_direct_oracle,
    eisenstein_hecke_coefficient,
    evaluate,
    evaluate_eisenstein,
    evaluate_holomorphic_lift,
    evaluate_horocycle,
    evaluate_maass,
    load_maass_data,
    scattering_ratio,
    tau_coefficients,
)
from horocycles.modsurf import UpperHalfPoint, apply_moebius
from horocycles.specfun import riemann_zeta

fd_points = st.builds(UpperHalfPoint, st.floats(-0.5, 0.5), st.floats(0.9, 3.0))


def tau_by_product(N):
    """q prod (1 - q^n)^24 by repeated polynomial multiplication."""
    poly = np.zeros(N, dtype=object)
    poly[0] = 1
    for n in range(1, N):
        for _ in range(24):
            shifted = np.zeros(N, dtype=object)
            shifted[n:] = poly[: N - n]
            poly = poly - shifted
    return [int(v) for v in poly]


class TestTau:
    def test_examples(self):
        tau = tau_coefficients(10)
        assert tau[:3] == [1, -24, 252]
        assert tau[5] == tau[1] * tau[2]

    def test_product_oracle(self):
        assert tau_coefficients(60) == tau_by_product(60)

    def test_prefix_stable(self):
        assert tau_coefficients(500)[:100] == tau_coefficients(100)

    def test_hecke_at_prime_powers(self):
        tau = tau_coefficients(3000)
        for p in (2, 3, 5, 7):
            pj = p
            while pj * p * p <= 3000:
                prev = tau[pj // p - 1] if pj > p else 1
                assert tau[p - 1] * tau[pj - 1] == tau[pj * p - 1] + p**11 * prev
                pj *= p


class TestHolomorphicLift:
    def test_value_at_i(self):
        form = delta_lift()
        direct = sum(a * math.exp(-2 * math.pi * m) for m, a in enumerate(tau_coefficients(200), start=1))
        val = evaluate_holomorphic_lift(form, UpperHalfPoint(0.0, 1.0))
        assert abs(val.imag) < 1e-18
        assert abs(val.real - direct) < 1e-13 * abs(direct)
        assert abs(abs(val) - 1.79e-3) < 1e-5

    @settings(max_examples=50, deadline=None)
    @given(fd_points)
    def test_periodicity(self, z):
        form = delta_lift()
        a = evaluate_holomorphic_lift(form, z)
        b = evaluate_holomorphic_lift(form, UpperHalfPoint(z.x + 1, z.y))
        assert abs(a - b) < 1e-12 * max(abs(a), 1e-300)

    @settings(max_examples=100, deadline=None)
    @given(fd_points, st.integers(0, 2**32))
    def test_modulus_invariance(self, z, seed):
        form = delta_lift()
        g = random_unimodular(np.random.default_rng(seed))
        a = evaluate_holomorphic_lift(form, z)
        b = evaluate_holomorphic_lift(form, apply_moebius(g, z))
        assert abs(abs(a) - abs(b)) < 1e-9 * abs(a)

    def test_transport_phase(self, rng):
        form = delta_lift()
        for _ in range(20):
            z = UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(1, 2))
            g = random_unimodular(rng)
            j = g.automorphy(z)
            # y^6 Delta(gz) = (j / |j|)^12 y^6 Delta(z)
            lhs = evaluate_holomorphic_lift(form, apply_moebius(g, z))
            rhs = (j / abs(j)) ** 12 * evaluate_holomorphic_lift(form, z)
            assert abs(lhs - rhs) < 1e-9 * abs(rhs)

    def test_horocycle_matches_generic(self):
        form = delta_lift()
        n = 101
        k = np.arange(1, n)
        fast = evaluate_horocycle(form, k, n)
        slow = [evaluate(form, UpperHalfPoint(kk / n, 1 / n)) for kk in k]
        assert np.allclose(fast, slow, rtol=1e-9, atol=0)

    def test_validation(self):
        tau = tau_coefficients(50)
        with pytest.raises(InvariantViolation):
            HolomorphicLift(12, (2,) + tuple(tau[1:]))
        bad = list(tau)
        bad[5] += 1
        with pytest.raises(InvariantViolation) as info:
            HolomorphicLift(12, tuple(bad))
        assert info.value.index == 6
        with pytest.raises(ValueError):
            HolomorphicLift(11, tuple(tau))

    def test_insufficient_coefficients(self):
        with pytest.raises(InsufficientCoefficients):
            evaluate_holomorphic_lift(delta_lift(3), UpperHalfPoint(0.0, 1.0))


class TestMaass:
    def test_odd_vanishes_on_axis(self, maass_form):
        assert maass_form.parity == "odd"
        for y in (0.9, 1.3, 2.5, 7.0):
            assert evaluate_maass(maass_form, UpperHalfPoint(0.0, y)) == 0.0

    def test_reflection_sign(self, maass_form):
        for x, y in [(0.2, 1.1), (0.41, 0.95), (0.13, 0.4)]:
            a = evaluate_maass(maass_form, UpperHalfPoint(x, y))
            b = evaluate_maass(maass_form, UpperHalfPoint(-x, y))
            assert abs(a + b) < 1e-12

    def test_invariance(self, maass_form, rng):
        for _ in range(20):
            z = UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
            g = random_unimodular(rng)
            a = evaluate_maass(maass_form, z)
            b = evaluate_maass(maass_form, apply_moebius(g, z))
            assert abs(a - b) < 1e-6

    def test_truncation(self, maass_form):
        z = UpperHalfPoint(0.31, math.sqrt(3) / 2)
        a = evaluate_maass(maass_form, z)
        b = evaluate_maass(maass_form, z, terms=maass_form.size)
        assert abs(a - b) < 1e-9

    def test_nonzero_somewhere(self, maass_form):
        assert abs(evaluate_maass(maass_form, UpperHalfPoint(0.25, 1.0))) > 1e-9


class TestEisenstein:
    def test_constant_term_at_height(self):
        s = 0.5 + 2j
        y = 10.0
        val = evaluate_eisenstein(UpperHalfPoint(0.0, y), s)
        const = y**s + scattering_ratio(s) * y ** (1 - s)
        assert abs(val - const) < 1e-20

    @pytest.mark.slow
    def test_oracle_match(self):
        z = UpperHalfPoint(0.3, 0.8)
        ref = eisenstein_direct_oracle(z, 1.3, 10**4, tail=True)
        assert abs(evaluate_eisenstein(z, 1.3) - ref) < 1e-5

    def test_critical_line_invariance(self, rng):
        for _ in range(10):
            z = UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
            g = random_unimodular(rng)
            a = evaluate_eisenstein(z, 0.5 + 1j)
            b = evaluate_eisenstein(apply_moebius(g, z), 0.5 + 1j)
            assert abs(a - b) < 1e-8

    def test_conjugation_on_critical_line(self):
        # conj E(z, s) = E(z, 1 - s) = phi(1 - s) E(z, s) when Re s = 1/2
        for t in (1.0, 5.0, 17.3):
            s = 0.5 + 1j * t
            v = evaluate_eisenstein(UpperHalfPoint(0.17, 1.2), s)
            assert abs(v.conjugate() - scattering_ratio(1 - s) * v) < 1e-12 * max(1, abs(v))

    def test_reflection(self):
        a = evaluate_eisenstein(UpperHalfPoint(0.21, 1.1), 1.4)
        b = evaluate_eisenstein(UpperHalfPoint(-0.21, 1.1), 1.4)
        assert abs(a - b) < 1e-13

    def test_vanishes_at_half(self):
        assert evaluate_eisenstein(UpperHalfPoint(0.1, 1.5), 0.5) == 0

    def test_pole(self):
        with pytest.raises(ValueError):
            evaluate_eisenstein(UpperHalfPoint(0.0, 1.0), 1.0)

    def test_kappa_stability(self):
        # low points, where the modes carry enough weight to resolve kappa
        pairs = [
            (UpperHalfPoint(0.0, 0.87), 1.5),
            (UpperHalfPoint(0.3, 0.96), 1.6),
            (UpperHalfPoint(-0.45, 0.9), 1.65),
            (UpperHalfPoint(0.1, 1.0), 1.7),
            (UpperHalfPoint(0.5, 0.87), 1.8),
        ]
        kappa, each = calibrate_kappa(pairs, cutoff=1500)
        assert (max(each) - min(each)) / kappa < 1e-4
        assert abs(kappa - EISENSTEIN_KAPPA) < 1e-4 * EISENSTEIN_KAPPA

    def test_kappa_resolved_at_low_sigma(self):
        pairs = [(UpperHalfPoint(0.0, 0.87), 1.2), (UpperHalfPoint(0.3, 0.96), 1.3)]
        _, each = calibrate_kappa(pairs, cutoff=1500)
        assert all(abs(k - EISENSTEIN_KAPPA) < 5e-3 for k in each)

    def test_hecke_coefficient_fitted_envelope(self):
        def ratio(m, t):
            return abs(eisenstein_hecke_coefficient(m, 0.5 + 1j * t)) / (m * (1 + abs(t))) ** 0.05

        ms = range(1, 1001)
        C = max(ratio(m, t) for t in np.arange(-20, 20.01, 2.5) for m in ms)
        rng = np.random.default_rng(5)
        held_out = max(ratio(int(m), t) for m, t in zip(rng.integers(1, 1001, 300), rng.uniform(-20, 20, 300)))
        assert math.isfinite(C) and held_out <= 2 * C

    def test_hecke_coefficient_envelope(self):
        for t in (1.0, 5.0):
            s = 0.5 + 1j * t
            zeta2s = abs(riemann_zeta(2 * s))
            for m in range(1, 400):
                lam = eisenstein_hecke_coefficient(m, s)
                assert abs(lam) * zeta2s <= len(divisors(m)) * (1 + 1e-12)

    def test_hecke_coefficient_multiplicative(self):
        s = 0.5 + 3j
        for m, n in [(2, 3), (4, 9), (5, 12), (7, 11)]:
            lhs = eisenstein_hecke_coefficient(m * n, s) * riemann_zeta(2 * s)
            rhs = eisenstein_hecke_coefficient(m, s) * eisenstein_hecke_coefficient(n, s) * riemann_zeta(2 * s) ** 2
            assert abs(lhs - rhs) < 1e-12


class TestDirectOracle:
    def test_identity_coset_dominates_high_up(self):
        y = 1e4
        val = eisenstein_direct_oracle(UpperHalfPoint(0.0, y), 1.5, 1)
        assert abs(val / y**1.5 - 1) < 1e-5

    def test_convergence(self):
        z = UpperHalfPoint(0.0, 1.0)
        a = eisenstein_direct_oracle(z, 2.0, 500)
        b = eisenstein_direct_oracle(z, 2.0, 1000)
        assert abs(a - b) < 1e-4

    def test_reflection(self):
        a = eisenstein_direct_oracle(UpperHalfPoint(0.3, 0.9), 1.5, 300)
        b = eisenstein_direct_oracle(UpperHalfPoint(-0.3, 0.9), 1.5, 300)
        assert abs(a - b) < 1e-12 * a

    def test_tail_correction_improves(self):
        z = UpperHalfPoint(0.2, 1.0)
        exact = evaluate_eisenstein(z, 1.5).real
        raw = abs(eisenstein_direct_oracle(z, 1.5, 400) - exact)
        cor = abs(eisenstein_direct_oracle(z, 1.5, 400, tail=True) - exact)
        assert cor < raw / 100

    def test_domain(self):
        with pytest.raises(ValueError):
            eisenstein_direct_oracle(UpperHalfPoint(0.0, 1.0), 1.0, 10)


class TestLoader:
    def test_minimal(self):
        form = load_maass_data(b"maass 1 9.53 odd\n1 1.0\n")
        assert isinstance(form, MaassForm) and form.size == 1

    def test_text_and_stream(self, tmp_path):
        p = tmp_path / "f.txt"
        p.write_text("# comment\nmaass 1 13.77 even\n\n1 1\n2 0.5\n")
        with open(p, "rb") as fh:
            form = load_maass_data(fh)
        assert form.parity == "even" and form.coefficients == (1.0, 0.5)
        assert load_maass_data(p.read_text()) == form

    def test_normalization_error(self):
        with pytest.raises(InvariantViolation):
            load_maass_data(b"maass 1 9.53 odd\n1 2.0\n")

    def test_hecke_error(self):
        # lambda(2)^2 = lambda(4) + 1 violated by 1e-3
        text = "maass 1 9.53 odd\n1 1\n2 0.5\n3 0.1\n4 -0.749\n"
        with pytest.raises(InvariantViolation) as info:
            load_maass_data(text)
        assert info.value.index == 4

    def test_hecke_ok(self):
        text = "maass 1 9.53 odd\n1 1\n2 0.5\n3 0.1\n4 -0.75\n"
        assert load_maass_data(text).size == 4

    def test_envelope_error(self):
        with pytest.raises(InvariantViolation):
            load_maass_data("maass 1 9.53 odd\n1 1\n2 3.0\n")

    @pytest.mark.parametrize(
        "text,line",
        [
            ("maas 1 9.5 odd\n1 1\n", 1),
            ("maass 1 9.5 weird\n1 1\n", 1),
            ("maass 1 9.5 odd\n1 1\n3 0.2\n", 3),
            ("maass 1 9.5 odd\n1 1\n2 abc\n", 3),
            ("maass 1 9.5 odd\n1 1\n2 0.1 7\n", 3),
            ("maass 1 9.5 odd\n1 1\n\n2 nan\n", 4),
        ],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(MaassParseError) as info:
            load_maass_data(text)
        assert info.value.line == line

    def test_empty(self):
        with pytest.raises(MaassParseError):
            load_maass_data(b"")

    def test_fixture_file_is_hecke_consistent(self, maass_form):
        lam = maass_form.coefficients
        for m in range(2, maass_form.size + 1):
            fac = factorize(m)
            if len(fac) > 1:
                prod = math.prod(lam[p**e - 1] for p, e in fac.items())
                assert abs(lam[m - 1] - prod) < 1e-6


def test_descriptor_dispatch():
    z = UpperHalfPoint(0.2, 1.3)
    assert evaluate(EisensteinLinePoint(1.0), z) == pytest.approx(evaluate_eisenstein(z, 0.5 + 1j), abs=1e-14)
    with pytest.raises(TypeError):
        evaluate(object(), z)
