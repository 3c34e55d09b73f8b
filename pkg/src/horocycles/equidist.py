"""Twisted Weyl sums over P(n), torus averages, discrepancies and decay fits.

All sums over the residues k run in ascending k, split into consecutive
blocks of ``chunk_size`` residues. Each block is reduced pairwise and the
block totals are reduced pairwise again, so a result depends on
``chunk_size`` but never on how many worker threads evaluated the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import coprime_residues, euler_phi, ramanujan_sum_exact
from .forms import EigenformDescriptor, evaluate_horocycle
from .specfun import complex_exponential, completed_xi

DEFAULT_CHUNK = 4096


class TooFewPoints(ValueError):
    pass


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite Fourier series sum_l c_l e(l x) on R/Z."""

    fourier: dict[int, complex]

    def __post_init__(self):
        clean = {int(l): complex(c) for l, c in self.fourier.items()}
        object.__setattr__(self, "fourier", clean)

    def coefficient(self, l: int) -> complex:
        return self.fourier.get(int(l), 0j)

    @property
    def integral(self) -> complex:
        return self.coefficient(0)

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(self.coefficient(-l) - c.conjugate()) <= tol for l, c in self.fourier.items())

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.zeros(xa.shape, dtype=complex)
        for l, c in self.fourier.items():
            out = out + c * complex_exponential(l * xa)
        return out

    def at_residues(self, k: np.ndarray, n: int) -> np.ndarray:
        """Values at k/n with l k reduced mod n exactly."""
        out = np.zeros(k.shape, dtype=complex)
        for l, c in self.fourier.items():
            out = out + c * _twist(k, n, l)
        return out


@dataclass(frozen=True)
class SpectralSynthesis:
    """``constant + sum_j coefficient_j * form_j`` on the modular surface."""

    constant: complex
    components: tuple[tuple[complex, EigenformDescriptor], ...] = ()

    @property
    def integral(self) -> complex:
        # non-constant eigenforms integrate to zero
        return complex(self.constant)

    def at_horocycle(self, k: np.ndarray, n: int) -> np.ndarray:
        out = np.full(k.shape, complex(self.constant))
        for coef, form in self.components:
            out = out + complex(coef) * evaluate_horocycle(form, k, n)
        return out


@dataclass(frozen=True)
class DecayFitResult:
    slope: float
    intercept: float
    stderr: float
    points_used: int
    slope_stderr: float = field(default=float("nan"))
    dropped: int = 0


@dataclass(frozen=True)
class EnvelopeReport:
    max_ratio: float
    argmax_n: int


# ---------------------------------------------------------------------------
# deterministic reductions


def pairwise_sum(values) -> complex:
    v = np.asarray(values, dtype=complex).ravel()
    if v.size == 0:
        return 0j
    while v.size > 1:
        if v.size % 2:
            v = np.append(v, 0j)
        v = v[0::2] + v[1::2]
    return complex(v[0])


def chunked_sum(func: Callable[[np.ndarray], np.ndarray], k: np.ndarray, chunk_size: int = DEFAULT_CHUNK, threads: int = 1):
    """Sum ``func(block)`` over consecutive blocks of k.

    ``func`` maps a block of residues to one or more rows of summands
    (shape ``(rows, len(block))``); the return value has one total per row.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    blocks = [k[i : i + chunk_size] for i in range(0, k.size, chunk_size)]

    def work(block):
        rows = np.atleast_2d(func(block))
        return [pairwise_sum(r) for r in rows]

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(work, blocks))
    else:
        partials = [work(b) for b in blocks]
    return [pairwise_sum(col) for col in zip(*partials)]


def _twist(k: np.ndarray, n: int, l: int) -> np.ndarray:
    r = (k * (int(l) % n)) % n
    return complex_exponential(r / n)


def _residues(n: int) -> np.ndarray:
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    return np.asarray(coprime_residues(n), dtype=np.int64)


# ---------------------------------------------------------------------------
# Weyl sums


def weyl_sums(form: EigenformDescriptor, n: int, ls: Sequence[int], chunk_size: int = DEFAULT_CHUNK, threads: int = 1) -> list[complex]:
    """Twisted averages ``phi(n)^-1 sum_k e(l k/n) F((k+i)/n)`` for several l.

    The form is evaluated once per sample and shared between the twists.
    """
    k = _residues(n)
    ls = [int(l) for l in ls]

    def block(kb):
        vals = evaluate_horocycle(form, kb, n)
        return np.stack([_twist(kb, n, l) * vals for l in ls])

    totals = chunked_sum(block, k, chunk_size, threads)
    return [t / k.size for t in totals]


def weyl_sum(form: EigenformDescriptor, n: int, l: int, chunk_size: int = DEFAULT_CHUNK, threads: int = 1) -> complex:
    return weyl_sums(form, n, [l], chunk_size, threads)[0]


def eisenstein_constant_term_prediction(n: int, l: int, t: float) -> complex:
    """Contribution of the constant term of E(., 1/2 + it) to the Weyl sum.

    ``n^(-1/2) (n^(-it) + xi(2it)/xi(1+2it) n^(it)) r_n(l)``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    t = float(t)
    if abs(t) > 100:
        raise ValueError("|t| must not exceed 100")
    if abs(t) < 1e-8:
        ratio = -1.0 + 0j
    else:
        ratio = completed_xi(2j * t) / completed_xi(1 + 2j * t)
    log_n = math.log(n)
    phase = complex(math.cos(t * log_n), math.sin(t * log_n))
    r = float(ramanujan_sum_exact(n, l))
    return n**-0.5 * (phase.conjugate() + ratio * phase) * r


# ---------------------------------------------------------------------------
# torus averages and discrepancy


def totient_average(f1: TrigPolynomial, n: int) -> complex:
    """``phi(n)^-1 sum_(k,n)=1 f1(k/n)`` as ``sum_l f1^(l) r_n(l)``."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    return sum((c * float(ramanujan_sum_exact(n, l)) for l, c in f1.fourier.items()), 0j)


def totient_average_direct(f1: TrigPolynomial, n: int) -> complex:
    k = _residues(n)
    return pairwise_sum(f1.at_residues(k, n)) / k.size


def discrepancy(f1: TrigPolynomial, f2: SpectralSynthesis, n: int, chunk_size: int = DEFAULT_CHUNK, threads: int = 1) -> complex:
    """Joint discrepancy of f1 (x) f2 over P(n), from Ramanujan and Weyl sums.

    ``sum_l f1^(l) [c0 r_n(l) + sum_j c_j W_j(n, l)] - f1^(0) c0``.
    """
    ls = sorted(f1.fourier)
    c0 = complex(f2.constant)
    per_l = {l: c0 * float(ramanujan_sum_exact(n, l)) for l in ls}
    for coef, form in f2.components:
        sums = weyl_sums(form, n, ls, chunk_size, threads)
        for l, w in zip(ls, sums):
            per_l[l] += complex(coef) * w
    total = sum((f1.fourier[l] * per_l[l] for l in ls), 0j)
    return total - f1.integral * f2.integral


def discrepancy_direct(f1: TrigPolynomial, f2: SpectralSynthesis, n: int, chunk_size: int = DEFAULT_CHUNK, threads: int = 1) -> complex:
    """The same quantity by summing ``f1(k/n) f2(sample)`` over P(n) directly."""
    k = _residues(n)
    (total,) = chunked_sum(lambda kb: f1.at_residues(kb, n) * f2.at_horocycle(kb, n), k, chunk_size, threads)
    return total / k.size - f1.integral * f2.integral


# ---------------------------------------------------------------------------
# fits


def decay_fit(samples: Iterable[tuple[int, complex]]) -> DecayFitResult:
    """Least-squares line through ``(log n, log |value|)``; zero values are dropped."""
    samples = list(samples)
    pts = [(float(n), abs(complex(v))) for n, v in samples if abs(complex(v)) > 0]
    dropped = len(samples) - len(pts)
    if len(pts) < 3:
        raise TooFewPoints(f"need at least 3 nonzero samples, have {len(pts)}")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ np.array([slope, intercept])
    dof = len(pts) - 2
    sigma = math.sqrt(float(resid @ resid) / dof)
    spread = float(np.sum((lx - lx.mean()) ** 2))
    slope_se = sigma / math.sqrt(spread) if spread > 0 else float("inf")
    return DecayFitResult(float(slope), float(intercept), sigma, len(pts), slope_se, dropped)


def envelope_check(samples: Iterable[tuple[int, complex]], exponent: float) -> EnvelopeReport:
    """Largest ``|value| / n^exponent`` over the samples and where it occurs."""
    samples = list(samples)
    if not samples:
        raise ValueError("envelope_check needs at least one sample")
    best_ratio, best_n = -1.0, None
    for n, v in samples:
        ratio = abs(complex(v)) / float(n) ** exponent
        if ratio > best_ratio:
            best_ratio, best_n = ratio, int(n)
    return EnvelopeReport(best_ratio, best_n)
