import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horocycles.arith import (
    coprime_residues,
    divisor_sigma,
    divisors,
    euler_phi,
    factorize,
    is_squarefree,
    mobius,
    primes_in_range,
    ramanujan_sum_closed,
    ramanujan_sum_direct,
    ramanujan_sum_exact,
)


def brute_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def brute_mobius(n):
    count, m, p = 0, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            count += 1
        p += 1
    if m > 1:
        count += 1
    return (-1) ** count


class TestMultiplicativeFunctions:
    def test_phi_examples(self):
        assert euler_phi(1) == 1
        assert euler_phi(13) == 12
        assert euler_phi(12) == 4

    def test_mobius_examples(self):
        assert mobius(1) == 1
        assert mobius(4) == 0
        assert mobius(30) == -1

    @pytest.mark.parametrize("n", list(range(1, 200)))
    def test_against_brute_force(self, n):
        assert euler_phi(n) == brute_phi(n)
        assert mobius(n) == brute_mobius(n)

    def test_divisor_sum_of_phi(self):
        for n in range(1, 10**4 + 1, 7):
            assert sum(euler_phi(d) for d in divisors(n)) == n

    def test_mobius_sums_to_zero(self):
        for n in range(2, 500):
            assert sum(mobius(d) for d in divisors(n)) == 0

    def test_rejects_nonpositive(self):
        for f in (euler_phi, mobius, coprime_residues):
            with pytest.raises(ValueError):
                f(0)
            with pytest.raises(ValueError):
                f(-3)

    def test_factorize_beyond_sieve(self):
        assert factorize(999_979 * 999_983) == {999_979: 1, 999_983: 1}
        with pytest.raises(ValueError):
            factorize(1_000_003 * 1_000_033)
        assert factorize(2**40) == {2: 40}

    def test_primes_and_squarefree(self):
        assert primes_in_range(10, 30) == [11, 13, 17, 19, 23, 29]
        assert is_squarefree(30) and not is_squarefree(12)


class TestDivisorSigma:
    def test_examples(self):
        assert divisor_sigma(0, 12) == 6
        assert divisor_sigma(1, 6) == 12
        expected = 1 + cmath.exp(2j * math.log(7))
        assert abs(divisor_sigma(2j, 7) - expected) < 1e-14

    def test_complex_exponent_matches_sum(self):
        z = 0.3 - 1.7j
        for n in (1, 12, 360, 1001):
            direct = sum(cmath.exp(z * math.log(d)) for d in divisors(n))
            assert abs(divisor_sigma(z, n) - direct) < 1e-10 * abs(direct)

    def test_integer_exponent_is_exact(self):
        assert divisor_sigma(11, 2) == 1 + 2**11
        assert isinstance(divisor_sigma(3, 10), int)


class TestResidues:
    def test_examples(self):
        assert coprime_residues(1) == [0]
        assert coprime_residues(6) == [1, 5]
        assert coprime_residues(5) == [1, 2, 3, 4]

    @given(st.integers(1, 3000))
    def test_count_is_phi(self, n):
        res = coprime_residues(n)
        assert len(res) == euler_phi(n)
        assert res == sorted(res)


class TestRamanujanSums:
    def test_direct_examples(self):
        assert abs(ramanujan_sum_direct(1, 5) - 1) < 1e-15
        assert abs(ramanujan_sum_direct(5, 1) + 0.25) < 1e-15
        assert abs(ramanujan_sum_direct(4, 2) + 1) < 1e-15

    def test_closed_examples(self):
        assert ramanujan_sum_closed(7, 0) == 1.0
        assert ramanujan_sum_closed(5, 1) == -0.25
        assert ramanujan_sum_closed(12, 3) == 0.0
        assert abs(ramanujan_sum_direct(12, 3)) < 1e-15

    def test_exact_is_fraction(self):
        assert ramanujan_sum_exact(6, 1) == Fraction(1, 2)

    def test_oracle_grid(self):
        worst = 0.0
        for n in range(1, 121):
            for m in range(-60, 61):
                worst = max(worst, abs(ramanujan_sum_closed(n, m) - ramanujan_sum_direct(n, m)))
        assert worst < 1e-10

    def test_multiplicative_in_n(self):
        for n1 in range(1, 40):
            for n2 in range(1, 40):
                if math.gcd(n1, n2) != 1:
                    continue
                for m in (0, 1, 6, 35):
                    assert ramanujan_sum_exact(n1 * n2, m) == ramanujan_sum_exact(n1, m) * ramanujan_sum_exact(n2, m)

    @settings(max_examples=200)
    @given(st.integers(1, 2000), st.integers(-10**6, 10**6))
    def test_symmetries(self, n, m):
        r = ramanujan_sum_closed(n, m)
        assert r == ramanujan_sum_closed(n, -m)
        assert r == ramanujan_sum_closed(n, m + n)
        assert abs(r) <= 1.0

    @given(st.integers(1, 2000))
    def test_squarefree_unit_twist(self, n):
        if is_squarefree(n):
            assert ramanujan_sum_exact(n, 1) == Fraction(mobius(n), euler_phi(n))
