"""Special functions in double precision.

* ``riemann_zeta`` -- Euler-Maclaurin summation, reflected through the
  functional equation for Re s < 0.
* ``gamma_r``, ``completed_xi`` -- the archimedean factor and the completed
  zeta function built on it.
* ``bessel_k`` -- K-Bessel of real or purely imaginary order, by the
  trapezoidal rule applied to ``int_0^inf exp(-x cosh t) cosh(nu t) dt``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import gamma, loggamma

# B_2, B_4, ..., B_16
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)
_EM_COEFFS = tuple(b / math.factorial(2 * k + 2) for k, b in enumerate(_BERNOULLI_EVEN))

_LOG_PI = math.log(math.pi)
_LOG_2 = math.log(2.0)
_UNDERFLOW_X = 760.0


def complex_exponential(x):
    """Return e(x) = exp(2 pi i x); accepts scalars or arrays.

    The argument is reduced mod 1 first so large integers parts cost nothing
    in accuracy.
    """
    xa = np.asarray(x, dtype=float)
    frac = xa - np.floor(xa)
    out = np.exp(2j * np.pi * frac)
    if out.ndim == 0:
        return complex(out)
    return out


def _zeta_em(s: complex, terms: int | None = None) -> complex:
    if terms is None:
        terms = max(20, math.ceil(2.0 * abs(s.imag)))
    n = terms
    k = np.arange(1, n, dtype=float)
    head = np.exp(-s * np.log(k)).sum()
    log_n = math.log(n)
    n_s = cmath.exp(-s * log_n)  # N^{-s}
    total = head + n * n_s / (s - 1.0) + 0.5 * n_s
    # rising factorial s (s+1) ... (s+2j-2), times N^{-s-2j+1}
    rising = s
    power = n_s / n
    for j, coeff in enumerate(_EM_COEFFS):
        total += coeff * rising * power
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
        power /= n * n
    return complex(total)


def riemann_zeta(s, terms: int | None = None) -> complex:
    """Riemann zeta at complex ``s``.

    ``terms`` overrides the Euler-Maclaurin truncation point, which defaults
    to ``max(20, ceil(2 |Im s|))`` with eight Bernoulli corrections.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("riemann_zeta has a pole at s = 1")
    if s.real >= 0.0:
        return _zeta_em(s, terms)
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    w = 1.0 - s
    log_factor = s * _LOG_2 + (s - 1.0) * _LOG_PI + complex(loggamma(w))
    return cmath.exp(log_factor) * cmath.sin(0.5 * math.pi * s) * _zeta_em(w, terms)


def _is_gamma_pole(w: complex) -> bool:
    return w.imag == 0.0 and w.real <= 0.0 and w.real == math.floor(w.real)


def gamma_r(s) -> complex:
    """pi^(-s/2) Gamma(s/2)."""
    s = complex(s)
    if _is_gamma_pole(0.5 * s):
        raise ValueError(f"gamma_r has a pole at s = {s}")
    if s.imag == 0.0 and 0.0 < s.real < 300.0:
        return complex(math.pi ** (-0.5 * s.real) * gamma(0.5 * s.real))
    return cmath.exp(-0.5 * s * _LOG_PI + complex(loggamma(0.5 * s)))


def completed_xi(s) -> complex:
    """Completed zeta function gamma_r(s) * zeta(s); poles at 0 and 1."""
    s = complex(s)
    if s == 0 or s == 1:
        raise ValueError(f"completed_xi has a pole at s = {s}")
    return gamma_r(s) * riemann_zeta(s)


def _bessel_grid(nu: float, real_order: bool, x_min: float, x_max: float):
    span = max(40.0, nu + 40.0) / x_min
    cutoff = math.asinh(span) + 5.0
    # Aliasing error of the trapezoidal rule is governed by K of order
    # (2 pi / h -/+ nu); this frequency keeps it below ~exp(-40).
    scale = nu if real_order else 0.0
    freq = nu + 30.0 + math.sqrt(80.0 * max(x_max, scale, 1.0))
    h = 2.0 * math.pi / freq
    count = int(math.ceil(cutoff / h)) + 1
    t = h * np.arange(count)
    w = np.full(count, h)
    w[0] = 0.5 * h
    return t, w


def bessel_k(order, x, chunk: int = 16384):
    """Modified Bessel function K of real or purely imaginary order.

    For order ``i*nu`` this is ``int_0^inf exp(-x cosh t) cos(nu t) dt``,
    which is real. ``x`` may be a scalar or an array of positive reals.
    """
    order = complex(order)
    if order.real != 0.0 and order.imag != 0.0:
        raise ValueError("bessel_k supports only real or purely imaginary order")
    real_order = order.imag == 0.0
    nu = abs(order.real) if real_order else abs(order.imag)
    if nu > 100.0:
        raise ValueError(f"|order| = {nu} is outside the supported range")

    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0.0)):
        raise ValueError("bessel_k requires x > 0")
    flat = xa.ravel()
    out = np.zeros_like(flat)
    # beyond this every term of the quadrature underflows
    live = np.nonzero(flat < _UNDERFLOW_X + (nu * nu / 2.0 if real_order else 0.0))[0]
    if live.size:
        order_idx = live[np.argsort(flat[live], kind="stable")]
        xs_sorted = flat[order_idx]
        # bins spanning a factor of 4 in x each get their own grid
        edges = np.searchsorted(xs_sorted, xs_sorted[0] * 4.0 ** np.arange(1, 64))
        start = 0
        for stop in list(np.unique(edges)) + [xs_sorted.size]:
            if stop <= start:
                continue
            sel = order_idx[start:stop]
            out[sel] = _bessel_block(nu, real_order, flat[sel], chunk)
            start = stop
    out = out.reshape(xa.shape)
    if out.ndim == 0:
        return float(out)
    return out


def _bessel_block(nu: float, real_order: bool, xs: np.ndarray, chunk: int) -> np.ndarray:
    t, w = _bessel_grid(nu, real_order, float(xs.min()), float(xs.max()))
    cosh_t = np.cosh(t)
    out = np.empty_like(xs)
    with np.errstate(over="ignore"):
        if real_order:
            plus, minus = nu * t, -nu * t
        else:
            weights = w * np.cos(nu * t)
        for start in range(0, xs.size, chunk):
            expo = -xs[start : start + chunk, None] * cosh_t
            if real_order:
                vals = 0.5 * (np.exp(expo + plus) + np.exp(expo + minus))
                out[start : start + chunk] = vals @ w
            else:
                out[start : start + chunk] = np.exp(expo) @ weights
    return out
