"""Evaluators for the spectral constituents on SL2(Z)\\H.

Three kinds of eigenform are supported, all as immutable descriptors:

``HolomorphicLift``
    A weight-k holomorphic Hecke eigenform with integer coefficients,
    lifted to the weight-0 function ``y^(k/2) F(z)`` (trivial rotation).
``MaassForm``
    A Maass cusp form, coefficients ingested from a data file.
``EisensteinLinePoint``
    The spherical Eisenstein series ``E(z, 1/2 + it)``.

Every evaluator reduces its argument to the fundamental domain first, then
sums a Fourier expansion truncated where the K-Bessel (or exponential)
tail drops below ``exp(-40)``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np
from scipy import integrate

from .arith import divisor_sigma, factorize
from .modsurf import UpperHalfPoint, reduce_arrays, reduce_rational
from .specfun import bessel_k, completed_xi, riemann_zeta

# Overall constant of the non-constant Eisenstein modes.  Fixed by
# least-squares agreement with ``eisenstein_direct_oracle`` (see
# ``calibrate_kappa``); the fit reproduces 4 to better than 1e-5.
EISENSTEIN_KAPPA = 4.0

TAIL_EXPONENT = 40.0
MAASS_ENVELOPE = 7.0 / 64.0 + 0.01
HECKE_TOL = 1e-6


class FormDataError(ValueError):
    """Base class for problems with form coefficient data."""


class MaassParseError(FormDataError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvariantViolation(FormDataError):
    def __init__(self, invariant: str, index: int, detail: str = ""):
        msg = f"{invariant} violated at index {index}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.invariant = invariant
        self.index = index


class InsufficientCoefficients(FormDataError):
    def __init__(self, needed: int, available: int):
        super().__init__(f"need {needed} coefficients, only {available} available")
        self.needed = needed
        self.available = available


# ---------------------------------------------------------------------------
# Ramanujan's tau


def _ones(count: int, nbytes: int) -> int:
    return int.from_bytes((b"\x01" + b"\x00" * (nbytes - 1)) * count, "little")


def _pack(coeffs: list[int], nbytes: int) -> int:
    half = 1 << (8 * nbytes - 1)
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(raw, "little") - half * _ones(len(coeffs), nbytes)


def _unpack(value: int, total: int, count: int, nbytes: int) -> list[int]:
    half = 1 << (8 * nbytes - 1)
    value += half * _ones(total, nbytes)
    value &= (1 << (8 * nbytes * count)) - 1
    raw = value.to_bytes(nbytes * count, "little")
    return [int.from_bytes(raw[i : i + nbytes], "little") - half for i in range(0, len(raw), nbytes)]


def _square_truncated(coeffs: list[int], length: int) -> list[int]:
    """Exact square of an integer polynomial mod q^length (Kronecker substitution)."""
    top = max(abs(c) for c in coeffs)
    bound = len(coeffs) * top * top
    nbytes = (bound.bit_length() + 2 + 7) // 8
    packed = _pack(coeffs, nbytes)
    return _unpack(packed * packed, 2 * len(coeffs) - 1, length, nbytes)


@lru_cache(maxsize=8)
def _tau_cached(N: int) -> tuple[int, ...]:
    # eta(q)^3 / q^(1/8) = sum_k (-1)^k (2k+1) q^(k(k+1)/2)
    eta3 = [0] * N
    k = 0
    while k * (k + 1) // 2 < N:
        eta3[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    poly = eta3
    for _ in range(3):
        poly = _square_truncated(poly, N)
    return tuple(poly)


def tau_coefficients(N: int) -> list[int]:
    """Ramanujan tau(1..N), the coefficients of q prod (1 - q^n)^24."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    return list(_tau_cached(N))


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class HolomorphicLift:
    weight: int
    coefficients: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        k = self.weight
        if k <= 0 or k % 2:
            raise ValueError(f"weight must be a positive even integer, got {k}")
        coeffs = tuple(int(a) for a in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs or coeffs[0] != 1:
            raise InvariantViolation("normalization a(1) = 1", 1)
        half = (k - 1) / 2.0
        for m in range(2, len(coeffs) + 1):
            a = coeffs[m - 1]
            fac = factorize(m)
            if len(fac) > 1:
                prod = 1
                for p, e in fac.items():
                    prod *= coeffs[p**e - 1]
                if prod != a:
                    raise InvariantViolation("multiplicativity", m)
            d0 = 1
            for e in fac.values():
                d0 *= e + 1
            if abs(a) / m**half > d0 * (1 + 1e-12):
                raise InvariantViolation("Deligne bound |lambda(m)| <= d(m)", m)

    @property
    def size(self) -> int:
        return len(self.coefficients)

    def normalized_eigenvalue(self, m: int) -> float:
        return self.coefficients[m - 1] / m ** ((self.weight - 1) / 2.0)


@lru_cache(maxsize=4)
def delta_lift(N: int = 200) -> HolomorphicLift:
    """Lift of the weight-12 discriminant form with N stored coefficients."""
    return HolomorphicLift(12, tuple(tau_coefficients(N)))


@dataclass(frozen=True)
class MaassForm:
    spectral_r: float
    parity: str
    coefficients: tuple[float, ...] = field(repr=False)

    def __post_init__(self):
        if not self.spectral_r > 0:
            raise ValueError("spectral parameter must be positive")
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        lam = tuple(float(v) for v in self.coefficients)
        object.__setattr__(self, "coefficients", lam)
        validate_maass_coefficients(lam)

    @property
    def size(self) -> int:
        return len(self.coefficients)


def validate_maass_coefficients(lam) -> None:
    """Check lambda(1) = 1, the 7/64 envelope and the prime-power Hecke relations."""
    N = len(lam)
    if N == 0 or lam[0] != 1.0:
        raise InvariantViolation("normalization lambda(1) = 1", 1, f"got {lam[0] if N else None}")
    for m in range(2, N + 1):
        d0 = 1
        for e in factorize(m).values():
            d0 *= e + 1
        if abs(lam[m - 1]) > d0 * m**MAASS_ENVELOPE:
            raise InvariantViolation("7/64 envelope |lambda(m)| <= d(m) m^(7/64+0.01)", m)
    for p in range(2, N + 1):
        if factorize(p) != {p: 1}:
            continue
        lp = lam[p - 1]
        prev, cur, pj = 1.0, lp, p
        while pj * p <= N:
            nxt = lam[pj * p - 1]
            if abs(lp * cur - nxt - prev) > HECKE_TOL:
                raise InvariantViolation(
                    "Hecke relation lambda(p)lambda(p^j) = lambda(p^(j+1)) + lambda(p^(j-1))",
                    pj * p,
                    f"p={p}",
                )
            prev, cur, pj = cur, nxt, pj * p


@dataclass(frozen=True)
class EisensteinLinePoint:
    t: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise ValueError("t must be finite")

    @property
    def s(self) -> complex:
        return complex(0.5, self.t)


EigenformDescriptor = Union[HolomorphicLift, MaassForm, EisensteinLinePoint]


# ---------------------------------------------------------------------------
# holomorphic lifts


def _q_terms(y_min: float) -> int:
    return max(1, math.ceil(TAIL_EXPONENT / (2.0 * math.pi * y_min)))


def _holomorphic_reduced(form: HolomorphicLift, xr, yr) -> np.ndarray:
    """y'^(k/2) F(z') at reduced points."""
    M = _q_terms(float(np.min(yr)))
    if M > form.size:
        raise InsufficientCoefficients(M, form.size)
    q = np.exp(2j * np.pi * (xr - np.floor(xr))) * np.exp(-2.0 * np.pi * yr)
    acc = np.zeros_like(q)
    for a in form.coefficients[M - 1 :: -1]:
        acc = acc * q + float(a)
    return acc * q * yr ** (form.weight / 2.0)


def _holomorphic_phase(form: HolomorphicLift, j: np.ndarray) -> np.ndarray:
    # (|j| / j)^k, j = c z + d at the original point
    u = np.conj(j) / np.abs(j)
    return u**form.weight


def evaluate_holomorphic_lift(form: HolomorphicLift, z: UpperHalfPoint) -> complex:
    """``y^(k/2) F(z)`` for the weight-k form F, via reduction and transport."""
    xr, yr, a, b, c, d = reduce_arrays([z.x], [z.y])
    j = c * z.z + d
    return complex((_holomorphic_reduced(form, xr, yr) * _holomorphic_phase(form, j))[0])


# ---------------------------------------------------------------------------
# Maass forms


def _maass_reduced(form: MaassForm, xr, yr, terms: int | None = None) -> np.ndarray:
    r = form.spectral_r
    M = terms or math.ceil((r + TAIL_EXPONENT) / (2.0 * math.pi * float(np.min(yr))))
    if M > form.size:
        raise InsufficientCoefficients(M, form.size)
    m = np.arange(1, M + 1, dtype=float)
    lam = np.asarray(form.coefficients[:M])
    arg = 2.0 * np.pi * np.outer(yr, m)
    kb = bessel_k(1j * r, arg)
    trig = np.cos if form.parity == "even" else np.sin
    phases = trig(2.0 * np.pi * np.outer(xr - np.floor(xr), m))
    return 2.0 * np.sqrt(yr) * ((kb * phases) @ lam)


def evaluate_maass(form: MaassForm, z: UpperHalfPoint, terms: int | None = None) -> float:
    """Maass form value; ``terms`` overrides the automatic truncation."""
    xr, yr, *_ = reduce_arrays([z.x], [z.y])
    return float(_maass_reduced(form, xr, yr, terms)[0])


# ---------------------------------------------------------------------------
# Eisenstein series


def _near_half(s: complex) -> bool:
    return abs(s - 0.5) < 1e-8


def scattering_ratio(s) -> complex:
    """xi(2s - 1) / xi(2s); the limit -1 is used at s = 1/2."""
    s = complex(s)
    if _near_half(s):
        return -1.0 + 0.0j
    return completed_xi(2 * s - 1) / completed_xi(2 * s)


def eisenstein_hecke_coefficient(m: int, s) -> complex:
    """|m|^(1/2 - s) sigma_(2s-1)(|m|) / zeta(2s); zero at s = 1/2."""
    s = complex(s)
    m = abs(int(m))
    if _near_half(s):
        return 0j
    return m ** (0.5 - s) * divisor_sigma(2 * s - 1, m) / riemann_zeta(2 * s)


@lru_cache(maxsize=256)
def _eisenstein_mode_weights(s: complex, M: int) -> np.ndarray:
    # m^(s - 1/2) sigma_(1-2s)(m) / xi(2s)
    inv_xi = 1.0 / completed_xi(2 * s)
    w = np.array([m ** (s - 0.5) * divisor_sigma(1 - 2 * s, m) for m in range(1, M + 1)])
    return w * inv_xi


def _eisenstein_parts(xr, yr, s: complex):
    """Constant term and unit-kappa mode sum at reduced points."""
    if s == 1:
        raise ValueError("the Eisenstein series has a pole at s = 1")
    xr = np.asarray(xr, dtype=float)
    yr = np.asarray(yr, dtype=float)
    if _near_half(s):
        # E(z, 1/2) vanishes identically: y^s - y^(1-s) and 1/xi(1) = 0
        zero = np.zeros(xr.shape, dtype=complex)
        return zero, zero
    ratio = scattering_ratio(s)
    log_y = np.log(yr)
    const = np.exp(s * log_y) + ratio * np.exp((1 - s) * log_y)
    M = math.ceil((abs(s.imag) + TAIL_EXPONENT) / (2.0 * math.pi * float(np.min(yr))))
    weights = _eisenstein_mode_weights(s, M)
    m = np.arange(1, M + 1, dtype=float)
    kb = bessel_k(s - 0.5, 2.0 * np.pi * np.outer(yr, m))
    cosines = np.cos(2.0 * np.pi * np.outer(xr - np.floor(xr), m))
    modes = np.sqrt(yr) * ((kb * cosines) @ weights)
    return const, modes


def evaluate_eisenstein(z: UpperHalfPoint, s) -> complex:
    """Spherical Eisenstein series E(z, s) from its Fourier expansion.

    Supported: real s in (1/2, 2] other than 1, and the critical line
    s = 1/2 + it with |t| <= 100.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("the Eisenstein series has a pole at s = 1")
    xr, yr, *_ = reduce_arrays([z.x], [z.y])
    const, modes = _eisenstein_parts(xr, yr, s)
    return complex(const[0] + EISENSTEIN_KAPPA * modes[0])


def _coprime_rows(cutoff: int):
    for c in range(1, cutoff + 1):
        d = np.arange(-cutoff, cutoff + 1, dtype=np.int64)
        yield c, d[np.gcd(d, c) == 1]


def _box_tail_integral(x: float, y: float, sigma: float) -> float:
    """Integral of |c z + d|^(-2 sigma) over max(|c|,|d|) > 1."""

    def integrand(theta):
        cs, sn = math.cos(theta), math.sin(theta)
        rho0 = 1.0 / max(abs(cs), abs(sn))
        g = (y * cs) ** 2 + (x * cs + sn) ** 2
        return rho0 ** (2 - 2 * sigma) / (2 * sigma - 2) * g ** (-sigma)

    total = 0.0
    for j in range(8):
        val, _ = integrate.quad(integrand, j * math.pi / 4, (j + 1) * math.pi / 4, epsabs=0, epsrel=1e-13, limit=200)
        total += val
    return total


def eisenstein_direct_oracle(z: UpperHalfPoint, sigma: float, cutoff: int, tail: bool = False) -> float:
    """Truncated defining sum of E(z, sigma) over Gamma_inf \\ Gamma.

    Sums ``y^sigma / |c z + d|^(2 sigma)`` over coprime (c, d), one of each
    pair +-(c, d), with ``max(|c|, |d|) <= cutoff``. With ``tail=True`` the
    omitted part is replaced by its continuum estimate: coprime pairs have
    density 6/pi^2, integrated outside the box of half-width cutoff + 1/2.
    """
    sigma = float(sigma)
    if sigma <= 1.0:
        raise ValueError("the defining sum converges only for sigma > 1")
    cutoff = int(cutoff)
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    x, y = z.x, z.y
    partial = [1.0]  # (c, d) = (0, 1), scaled by y^sigma below
    for c, d in _coprime_rows(cutoff):
        u = (c * x + d) ** 2 + (c * y) ** 2
        partial.append(float(np.sum(u ** (-sigma))))
    total = math.fsum(partial) * y**sigma
    if tail:
        radius = cutoff + 0.5
        total += 3.0 / math.pi**2 * y**sigma * radius ** (2 - 2 * sigma) * _box_tail_integral(x, y, sigma)
    return total


def calibrate_kappa(samples, cutoff: int = 3000):
    """Least-squares constant of the Eisenstein modes against the direct sum.

    ``samples`` is a sequence of ``(UpperHalfPoint, sigma)`` with sigma > 1.
    Returns ``(kappa, per_sample_kappas)``.
    """
    num = den = 0.0
    each = []
    for z, sigma in samples:
        target = eisenstein_direct_oracle(z, sigma, cutoff, tail=True)
        const, modes = _eisenstein_parts(np.array([z.x]), np.array([z.y]), complex(sigma))
        resid = target - const[0].real
        u = modes[0].real
        each.append(resid / u)
        num += resid * u
        den += u * u
    return num / den, each


# ---------------------------------------------------------------------------
# dispatch


def evaluate_reduced(form: EigenformDescriptor, xr, yr) -> np.ndarray:
    """Weight-0 values at points already in the fundamental domain.

    For holomorphic lifts this is ``y'^(k/2) F(z')`` without the phase
    picked up under transport.
    """
    if isinstance(form, HolomorphicLift):
        return _holomorphic_reduced(form, xr, yr)
    if isinstance(form, MaassForm):
        return _maass_reduced(form, xr, yr).astype(complex)
    if isinstance(form, EisensteinLinePoint):
        if abs(form.t) > 100:
            raise ValueError("|t| must not exceed 100")
        const, modes = _eisenstein_parts(xr, yr, form.s)
        return const + EISENSTEIN_KAPPA * modes
    raise TypeError(f"unsupported form descriptor {type(form).__name__}")


def evaluate_points(form: EigenformDescriptor, x, y) -> np.ndarray:
    """Evaluate a form at arbitrary points given as coordinate arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xr, yr, a, b, c, d = reduce_arrays(x, y)
    vals = evaluate_reduced(form, xr, yr)
    if isinstance(form, HolomorphicLift):
        vals = vals * _holomorphic_phase(form, c * (x + 1j * y) + d)
    return vals


def evaluate(form: EigenformDescriptor, z: UpperHalfPoint) -> complex:
    return complex(evaluate_points(form, [z.x], [z.y])[0])


def evaluate_horocycle(form: EigenformDescriptor, k, n) -> np.ndarray:
    """Values at the points (k + i)/n, reduced with exact integer arithmetic."""
    k = np.asarray(k, dtype=np.int64)
    n = np.broadcast_to(np.asarray(n, dtype=np.int64), k.shape)
    xr, yr, c, d = reduce_rational(k, n)
    vals = evaluate_reduced(form, xr, yr)
    if isinstance(form, HolomorphicLift):
        j = ((c * k + d * n) + 1j * c) / n
        vals = vals * _holomorphic_phase(form, j)
    return vals


# ---------------------------------------------------------------------------
# Maass data files


def load_maass_data(source) -> MaassForm:
    """Parse and validate a Maass coefficient file.

    ``source`` may be bytes, str, or a binary/text stream. The format is a
    header ``maass 1 <r> <even|odd>`` followed by ``m lambda(m)`` lines with
    m = 1, 2, ... consecutive; blank lines and ``#`` comments are ignored.
    """
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw
    header = None
    lam: list[float] = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if header is None:
            if len(fields) != 4 or fields[0] != "maass" or fields[1] != "1":
                raise MaassParseError("expected header 'maass 1 <r> <even|odd>'", lineno)
            try:
                r = float(fields[2])
            except ValueError:
                raise MaassParseError(f"bad spectral parameter {fields[2]!r}", lineno) from None
            if fields[3] not in ("even", "odd"):
                raise MaassParseError(f"bad parity {fields[3]!r}", lineno)
            header = (r, fields[3])
            continue
        if len(fields) != 2:
            raise MaassParseError("expected 'm lambda(m)'", lineno)
        try:
            m = int(fields[0])
            val = float(fields[1])
        except ValueError:
            raise MaassParseError(f"cannot parse {body!r}", lineno) from None
        if m != len(lam) + 1:
            raise MaassParseError(f"expected index {len(lam) + 1}, got {m}", lineno)
        if not math.isfinite(val):
            raise MaassParseError(f"non-finite coefficient at m={m}", lineno)
        lam.append(val)
    if header is None:
        raise MaassParseError("missing header", 0)
    if not lam:
        raise MaassParseError("no coefficients", 0)
    return MaassForm(header[0], header[1], tuple(lam))
