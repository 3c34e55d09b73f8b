"""Coefficients of the first odd Maass cusp form for SL2(Z) by Hejhal's method.

The library never computes Maass data itself; it ingests coefficient files.
This script produces such a file so the Maass evaluator and the Maass
Weyl sums can be exercised end to end.

Method: sample the truncated expansion

    f(x + iY) = sum_{m <= M} c(m) sqrt(Y) K_{ir}(2 pi m Y) sin(2 pi m x)

at 2Q equally spaced points on a low horizontal line, replace each value by
the expansion at the point's reduced representative (invariance), and
invert the discrete sine transform. With c(1) = 1 this is a linear system
for c(2..M). A wrong r leaves a mismatch between two choices of Y; a secant
iteration on that mismatch refines r.

Run:  python demos/07_maass_coefficients_hejhal.py [output-path]
"""

import sys
from pathlib import Path

import numpy as np

from horocycles.forms import load_maass_data
from horocycles.modsurf import reduce_arrays
from horocycles.specfun import bessel_k

M = 26
Q = 40
R_START = 9.5336952613


def whittaker(r, m, y):
    # scaled so typical entries are O(1)
    return np.sqrt(y) * bessel_k(1j * r, 2 * np.pi * m * y) * np.exp(np.pi * r / 2)


def solve(r, Y):
    j = np.arange(1 - Q, Q + 1)
    x = (2 * j - 1) / (4.0 * Q)
    xr, yr, *_ = reduce_arrays(x, np.full(x.shape, Y))
    ms = np.arange(1, M + 1)
    W_star = whittaker(r, ms[None, :], yr[:, None]) * np.sin(2 * np.pi * ms[None, :] * xr[:, None])
    S = np.sin(2 * np.pi * ms[:, None] * x[None, :]) / Q
    V = S @ W_star - np.diag(whittaker(r, ms, Y))
    # c(1) = 1 moves the first column to the right-hand side
    rhs = -V[:, 0]
    coeffs, *_ = np.linalg.lstsq(V[:, 1:], rhs, rcond=None)
    return np.concatenate([[1.0], coeffs])


def mismatch(r):
    return solve(r, 0.21)[1] - solve(r, 0.19)[1]


def refine(r0, r1, steps=8):
    f0, f1 = mismatch(r0), mismatch(r1)
    for _ in range(steps):
        if f1 == f0:
            break
        r0, r1, f0 = r1, r1 - f1 * (r1 - r0) / (f1 - f0), f1
        f1 = mismatch(r1)
    return r1


def main(out=None):
    r = refine(R_START, R_START + 1e-7)
    c = (solve(r, 0.21) + solve(r, 0.19)) / 2
    spread = np.abs(solve(r, 0.21) - solve(r, 0.19))
    print(f"r = {r:.13f}")
    for m in range(1, 11):
        print(f"  c({m:2d}) = {c[m - 1]: .12f}   (Y-spread {spread[m - 1]:.1e})")
    # keep the coefficients that are stable in Y
    keep = int(np.argmax(spread > 1e-9)) if np.any(spread > 1e-9) else M
    keep = min(keep, 20)
    lines = [
        "# first odd Maass cusp form for SL2(Z), Hejhal's method",
        f"maass 1 {r:.13f} odd",
    ]
    lines += [f"{m} {c[m - 1]:.15f}" for m in range(1, keep + 1)]
    text = "\n".join(lines) + "\n"
    form = load_maass_data(text)  # validates normalization, envelope, Hecke relations
    print(f"{form.size} coefficients pass validation")
    if out:
        Path(out).write_text(text)
        print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
