"""Upper half-plane geometry for SL2(Z): Moebius action, reduction to the
standard fundamental domain, and the horocycle sample sets P(n).

Scalar helpers work on :class:`UpperHalfPoint`; the evaluators in
:mod:`horocycles.forms` use the array versions :func:`reduce_arrays` and
:func:`reduce_rational`, which carry the same contract elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import coprime_residues

FD_TOL = 1e-12


class ReductionError(ArithmeticError):
    """Raised when reduction fails to terminate within its step budget."""


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0.0) or not math.isfinite(self.y) or not math.isfinite(self.x):
            raise ValueError(f"not a point of the upper half-plane: ({self.x}, {self.y})")

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def in_fundamental_domain(self, tol: float = FD_TOL) -> bool:
        return abs(self.x) <= 0.5 + tol and self.x * self.x + self.y * self.y >= (1.0 - tol) ** 2


@dataclass(frozen=True)
class UnimodularMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def identity(cls) -> "UnimodularMatrix":
        return cls(1, 0, 0, 1)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def automorphy(self, z: UpperHalfPoint) -> complex:
        """The factor c z + d."""
        return self.c * z.z + self.d


S = UnimodularMatrix(0, -1, 1, 0)
T = UnimodularMatrix(1, 1, 0, 1)


@dataclass(frozen=True)
class ReductionResult:
    reduced: UpperHalfPoint
    gamma: UnimodularMatrix
    automorphy: complex


@dataclass(frozen=True)
class HorocycleSample:
    k: int
    n: int

    @property
    def torus_coord(self) -> float:
        return self.k / self.n

    @property
    def point(self) -> UpperHalfPoint:
        return UpperHalfPoint(self.k / self.n, 1.0 / self.n)


def apply_moebius(gamma: UnimodularMatrix, z: UpperHalfPoint) -> UpperHalfPoint:
    zc = z.z
    w = (gamma.a * zc + gamma.b) / (gamma.c * zc + gamma.d)
    # the height formula is better conditioned than Im(w)
    height = z.y / abs(gamma.c * zc + gamma.d) ** 2
    return UpperHalfPoint(w.real, height)


def _step_budget(y: np.ndarray) -> np.ndarray:
    return 10 * (64 + np.abs(np.log2(y)))


def reduce_arrays(x, y):
    """Reduce arrays of points into the fundamental domain.

    Returns ``(xr, yr, a, b, c, d)``; the int64 arrays hold the matrix that
    maps each original point to its reduced representative.
    """
    x0 = np.array(x, dtype=float, ndmin=1)
    y0 = np.array(y, dtype=float, ndmin=1)
    x0, y0 = np.broadcast_arrays(x0, y0)
    if np.any(~(y0 > 0.0)):
        raise ValueError("points must have positive height")
    xs, ys = x0.astype(float).copy(), y0.astype(float).copy()
    a = np.ones(xs.shape, dtype=np.int64)
    b = np.zeros(xs.shape, dtype=np.int64)
    c = np.zeros(xs.shape, dtype=np.int64)
    d = np.ones(xs.shape, dtype=np.int64)
    budget = _step_budget(y0)
    steps = np.zeros(xs.shape, dtype=np.int64)
    active = np.ones(xs.shape, dtype=bool)
    while active.any():
        idx = np.nonzero(active)[0]
        m = np.rint(xs[idx]).astype(np.int64)
        xs[idx] -= m
        a[idx] -= m * c[idx]
        b[idx] -= m * d[idx]
        r2 = xs[idx] ** 2 + ys[idx] ** 2
        inv = r2 < 1.0 - 1e-15
        j = idx[inv]
        xs[j], ys[j] = -xs[j] / r2[inv], ys[j] / r2[inv]
        a[j], b[j], c[j], d[j] = -c[j], -d[j], a[j], b[j]
        steps[idx] += 1
        active[idx[~inv]] = False
        if np.any(steps[j] > budget[j]):
            raise ReductionError("reduction exceeded its step budget")
    # recompute from the original point so the result is exactly gamma . z
    z = x0 + 1j * y0
    cz_d = c * z + d
    w = (a * z + b) / cz_d
    return w.real, y0 / np.abs(cz_d) ** 2, a, b, c, d


def reduce_rational(k, n):
    """Reduce the points (k + i)/n exactly; k and n are integer arrays.

    Every step recomputes the current point from the integer matrix, so no
    rounding error accumulates. Returns ``(xr, yr, c, d)``; the automorphy
    factor at the original point is ``(c k + d n + i c) / n``.
    """
    k = np.array(k, dtype=np.int64, ndmin=1)
    n = np.array(n, dtype=np.int64, ndmin=1)
    k, n = np.broadcast_arrays(k, n)
    a = np.ones(k.shape, dtype=np.int64)
    b = np.zeros(k.shape, dtype=np.int64)
    c = np.zeros(k.shape, dtype=np.int64)
    d = np.ones(k.shape, dtype=np.int64)
    budget = _step_budget(1.0 / n)
    steps = np.zeros(k.shape, dtype=np.int64)

    def current(idx):
        u = a[idx] * k[idx] + b[idx] * n[idx]
        v = c[idx] * k[idx] + d[idx] * n[idx]
        den = v * v + c[idx] * c[idx]
        num = u * v + a[idx] * c[idx]
        return num / den, n[idx] / den, num, den

    active = np.ones(k.shape, dtype=bool)
    while active.any():
        idx = np.nonzero(active)[0]
        xr, _, num, den = current(idx)
        # exact nearest integer to num/den
        m = np.floor_divide(2 * num + den, 2 * den)
        a[idx] -= m * c[idx]
        b[idx] -= m * d[idx]
        xr, yr, _, _ = current(idx)
        inv = xr * xr + yr * yr < 1.0 - 1e-15
        j = idx[inv]
        a[j], b[j], c[j], d[j] = -c[j], -d[j], a[j], b[j]
        steps[idx] += 1
        active[idx[~inv]] = False
        if np.any(steps[j] > budget[j]):
            raise ReductionError("reduction exceeded its step budget")
    xr, yr, _, _ = current(np.arange(k.size))
    return xr, yr, c, d


def reduce_to_fundamental_domain(z: UpperHalfPoint) -> ReductionResult:
    xr, yr, a, b, c, d = reduce_arrays([z.x], [z.y])
    gamma = UnimodularMatrix(int(a[0]), int(b[0]), int(c[0]), int(d[0]))
    return ReductionResult(UpperHalfPoint(float(xr[0]), float(yr[0])), gamma, gamma.automorphy(z))


def horocycle_points(n: int) -> list[HorocycleSample]:
    """The samples (k/n, (k + i)/n) for k coprime to n."""
    return [HorocycleSample(k, int(n)) for k in coprime_residues(n)]
