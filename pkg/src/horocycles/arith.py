"""Exact arithmetic functions: totient, Moebius, divisor sums, Ramanujan sums.

Factorizations use a smallest-prime-factor sieve built lazily up to
``SIEVE_BOUND`` and trial division by sieved primes beyond it.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache

import numpy as np

SIEVE_BOUND = 10**6

_sieve_lock = threading.Lock()
_spf: np.ndarray | None = None
_primes: np.ndarray | None = None


def _check_positive(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    return n


def _build_sieve(bound: int) -> tuple[np.ndarray, np.ndarray]:
    spf = np.zeros(bound + 1, dtype=np.int64)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    primes = rest[rest >= 2]
    return spf, primes


def _sieve() -> tuple[np.ndarray, np.ndarray]:
    global _spf, _primes
    if _spf is None:
        with _sieve_lock:
            if _spf is None:
                spf, primes = _build_sieve(SIEVE_BOUND)
                _primes = primes
                _spf = spf
    return _spf, _primes


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n`` as ``{p: e}``; ``factorize(1) == {}``."""
    n = _check_positive(n)
    spf, primes = _sieve()
    out: dict[int, int] = {}
    if n > SIEVE_BOUND:
        for p in primes:
            p = int(p)
            if p * p > n or n <= SIEVE_BOUND:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        if n > SIEVE_BOUND:
            # no prime factor below the bound, so n is prime if n < bound^2
            if n > int(primes[-1]) ** 2:
                raise ValueError("cofactor exceeds the factorization range")
            out[n] = out.get(n, 0) + 1
            return out
    while n > 1:
        p = int(spf[n])
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi (hi at most ``SIEVE_BOUND``)."""
    if hi > SIEVE_BOUND:
        raise ValueError(f"upper bound {hi} exceeds sieve bound {SIEVE_BOUND}")
    _, primes = _sieve()
    sel = primes[(primes >= lo) & (primes <= hi)]
    return [int(p) for p in sel]


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def euler_phi(n: int) -> int:
    """Euler's totient."""
    result = _check_positive(n)
    for p in factorize(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def divisor_sigma(z, n: int):
    """Sum of ``d**z`` over the divisors d of n.

    A nonnegative integer exponent gives an exact ``int``; anything else a
    ``complex``.
    """
    fac = factorize(n)
    if isinstance(z, (int, np.integer)) and not isinstance(z, bool) and z >= 0:
        z = int(z)
        total = 1
        for p, e in fac.items():
            total *= sum(p ** (z * j) for j in range(e + 1))
        return total
    z = complex(z)
    total = 1.0 + 0.0j
    for p, e in fac.items():
        w = cmath.exp(z * math.log(p))
        term, acc = 1.0 + 0.0j, 1.0 + 0.0j
        for _ in range(e):
            term *= w
            acc += term
        total *= acc
    return total


def _coprime_array(n: int) -> np.ndarray:
    if n <= 4096:
        return _coprime_array_cached(n)
    k = np.arange(n, dtype=np.int64)
    return k[np.gcd(k, n) == 1]


@lru_cache(maxsize=1024)
def _coprime_array_cached(n: int) -> np.ndarray:
    if n == 1:
        out = np.zeros(1, dtype=np.int64)
    else:
        k = np.arange(n, dtype=np.int64)
        out = k[np.gcd(k, n) == 1]
    out.setflags(write=False)
    return out


def coprime_residues(n: int) -> list[int]:
    """Residues 0 <= k < n with gcd(k, n) = 1, ascending; ``[0]`` for n = 1."""
    return _coprime_array(_check_positive(n)).tolist()


def ramanujan_sum_direct(n: int, m: int) -> complex:
    """Average of e(a m / n) over the primitive residues a, summed directly."""
    n = _check_positive(n)
    a = _coprime_array(n)
    # reduce a*m mod n exactly before going to floating point
    r = (a * (int(m) % n)) % n
    vals = np.exp(2j * np.pi * r / n)
    return complex(math.fsum(vals.real.tolist()) / len(a), math.fsum(vals.imag.tolist()) / len(a))


@lru_cache(maxsize=65536)
def ramanujan_sum_exact(n: int, m: int) -> Fraction:
    """Closed form mu(n/g) / phi(n/g) with g = gcd(n, |m|), as a Fraction."""
    n = _check_positive(n)
    q = n // math.gcd(n, abs(int(m)))
    return Fraction(mobius(q), euler_phi(q))


def ramanujan_sum_closed(n: int, m: int) -> float:
    return float(ramanujan_sum_exact(n, m))
