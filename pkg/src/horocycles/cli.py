"""Command-line front end: Weyl-sum sweeps, discrepancies, fits and tables.

Every error exits with a single line on stderr of the form
``error[config]: ...`` (exit 2) or ``error[data]: ...`` (exit 3).

Randomized checks draw from numpy's PCG64 generator seeded with ``--seed``.
``--threads`` changes speed only; it is left out of the ``meta`` block so
outputs stay byte-identical across worker counts.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .arith import euler_phi, primes_in_range, ramanujan_sum_closed, ramanujan_sum_direct
from .equidist import (
    DEFAULT_CHUNK,
    SpectralSynthesis,
    TooFewPoints,
    TrigPolynomial,
    decay_fit,
    discrepancy,
    weyl_sums,
)
from .forms import (
    EisensteinLinePoint,
    FormDataError,
    delta_lift,
    eisenstein_direct_oracle,
    evaluate,
    evaluate_eisenstein,
    load_maass_data,
)
from .modsurf import UnimodularMatrix, UpperHalfPoint, apply_moebius, reduce_to_fundamental_domain


class ConfigError(Exception):
    exit_code = 2
    tag = "config"


class DataError(Exception):
    exit_code = 3
    tag = "data"


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_span(text: str) -> tuple[int, int, int]:
    parts = text.split("..")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ConfigError(f"bad range {text!r}; expected a..b or a..b..step") from None
    if len(nums) == 2:
        nums.append(1)
    if len(nums) != 3 or nums[2] < 1 or nums[0] > nums[1]:
        raise ConfigError(f"bad range {text!r}; expected a..b or a..b..step")
    return nums[0], nums[1], nums[2]


def resolve_ns(args) -> list[int]:
    if args.n is not None:
        try:
            ns = sorted({int(v) for chunk in args.n for v in chunk.split(",") if v})
        except ValueError:
            raise ConfigError(f"bad --n value {args.n!r}") from None
    elif args.primes is not None:
        lo, hi, _ = _parse_span(args.primes)
        ns = primes_in_range(lo, hi)
    elif args.range is not None:
        lo, hi, step = _parse_span(args.range)
        ns = list(range(lo, hi + 1, step))
    else:
        raise ConfigError("one of --n, --primes, --range is required")
    if not ns:
        raise ConfigError("the n specification is empty")
    if ns[0] < 1:
        raise ConfigError("all n must be positive")
    return ns


def parse_form(spec: str):
    """Form descriptor strings: ``delta``, ``eisenstein:<t>``, ``maass:<path>``."""
    kind, _, arg = spec.partition(":")
    if kind == "delta" and not arg:
        return delta_lift(200)
    if kind == "eisenstein":
        try:
            t = float(arg)
        except ValueError:
            raise ConfigError(f"bad Eisenstein parameter in {spec!r}") from None
        if not math.isfinite(t) or abs(t) > 100:
            raise ConfigError(f"Eisenstein parameter must satisfy |t| <= 100: {spec!r}")
        return EisensteinLinePoint(t)
    if kind == "maass" and arg:
        path = Path(arg)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise DataError(f"cannot read Maass file {arg}: {exc.strerror}") from None
        try:
            return load_maass_data(data)
        except (FormDataError, ValueError) as exc:
            raise DataError(f"{arg}: {exc}") from None
    raise ConfigError(f"unknown form spec {spec!r}; expected delta, eisenstein:<t> or maass:<path>")


def _read_lines(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def read_f1(path: str) -> TrigPolynomial:
    coeffs: dict[int, complex] = {}
    for lineno, fields in _read_lines(path):
        try:
            l, re_, im = int(fields[0]), float(fields[1]), float(fields[2])
            if len(fields) != 3:
                raise ValueError
        except (ValueError, IndexError):
            raise ConfigError(f"{path} line {lineno}: expected 'l re im'") from None
        coeffs[l] = coeffs.get(l, 0j) + complex(re_, im)
    if not coeffs:
        raise ConfigError(f"{path}: no Fourier coefficients")
    return TrigPolynomial(coeffs)


def read_f2(path: str) -> SpectralSynthesis:
    constant = None
    components = []
    for lineno, fields in _read_lines(path):
        if constant is None:
            if len(fields) != 3 or fields[0] != "constant":
                raise ConfigError(f"{path} line {lineno}: expected header 'constant re im'")
            try:
                constant = complex(float(fields[1]), float(fields[2]))
            except ValueError:
                raise ConfigError(f"{path} line {lineno}: bad constant") from None
            continue
        if len(fields) != 3:
            raise ConfigError(f"{path} line {lineno}: expected 're im <form_spec>'")
        try:
            coef = complex(float(fields[0]), float(fields[1]))
        except ValueError:
            raise ConfigError(f"{path} line {lineno}: bad coefficient") from None
        components.append((coef, parse_form(fields[2])))
    if constant is None:
        raise ConfigError(f"{path}: missing 'constant' header")
    return SpectralSynthesis(constant, tuple(components))


# ---------------------------------------------------------------------------
# output


def _num(v: float):
    return v if math.isfinite(v) else None


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(args, columns: list[str], rows: list[dict], meta: dict, extra: dict | None = None) -> None:
    if args.format == "json":
        doc = {"meta": meta, "rows": [{c: (_num(r[c]) if isinstance(r[c], float) else r[c]) for c in columns} for r in rows]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r[c]) for c in columns])
        for name, block in (extra or {}).items():
            buf.write(f"# {name} " + " ".join(f"{k}={_fmt(v)}" for k, v in block.items()) + "\n")
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _meta(args, **more) -> dict:
    skip = {"func", "threads", "out"}
    meta = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    meta["version"] = __version__
    meta.update(more)
    return meta


def _log(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


# ---------------------------------------------------------------------------
# commands


def cmd_weyl(args) -> int:
    ns = resolve_ns(args)
    form = parse_form(args.form)
    rows = []
    for n in ns:
        try:
            (w,) = weyl_sums(form, n, [args.l], args.chunk_size, args.threads)
        except FormDataError as exc:
            raise DataError(str(exc)) from None
        a = abs(w)
        rows.append({"n": n, "phi_n": euler_phi(n), "re": w.real, "im": w.imag, "abs": a, "log_n": math.log(n), "log_abs": _log(a)})
    emit(args, ["n", "phi_n", "re", "im", "abs", "log_n", "log_abs"], rows, _meta(args))
    return 0


def cmd_discrepancy(args) -> int:
    ns = resolve_ns(args)
    f1 = read_f1(args.f1)
    f2 = read_f2(args.f2)
    rows = []
    for n in ns:
        try:
            v = discrepancy(f1, f2, n, args.chunk_size, args.threads)
        except FormDataError as exc:
            raise DataError(str(exc)) from None
        a = abs(v)
        rows.append({"n": n, "re": v.real, "im": v.imag, "abs": a, "log_n": math.log(n), "log_abs": _log(a)})
    extra = None
    if args.fit:
        try:
            fit = decay_fit([(r["n"], r["abs"]) for r in rows])
            extra = {"fit": {"slope": fit.slope, "stderr": fit.stderr, "slope_stderr": fit.slope_stderr, "points_used": fit.points_used}}
        except TooFewPoints as exc:
            extra = {"fit": {"error": str(exc).replace(" ", "_")}}
    emit(args, ["n", "re", "im", "abs", "log_n", "log_abs"], rows, _meta(args), extra)
    return 0


def cmd_fit(args) -> int:
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc.strerror}") from None
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or "n" not in reader.fieldnames or "abs" not in reader.fieldnames:
        raise ConfigError(f"{args.input}: table needs 'n' and 'abs' columns")
    try:
        samples = [(int(r["n"]), float(r["abs"])) for r in reader]
    except (TypeError, ValueError):
        raise ConfigError(f"{args.input}: non-numeric n/abs entry") from None
    try:
        fit = decay_fit(samples)
    except TooFewPoints as exc:
        raise ConfigError(str(exc)) from None
    doc = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "stderr": fit.stderr,
        "slope_stderr": fit.slope_stderr,
        "points_used": fit.points_used,
        "dropped": fit.dropped,
    }
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_tables_ramanujan(args) -> int:
    if args.nmax < 1 or args.mmax < 0:
        raise ConfigError("--nmax must be >= 1 and --mmax >= 0")
    rows = []
    worst = 0.0
    for n in range(1, args.nmax + 1):
        for m in range(-args.mmax, args.mmax + 1):
            closed = ramanujan_sum_closed(n, m)
            direct = ramanujan_sum_direct(n, m)
            diff = abs(closed - direct)
            worst = max(worst, diff)
            rows.append({"n": n, "m": m, "closed": closed, "direct_re": direct.real, "direct_im": direct.imag, "abs_diff": diff})
    emit(args, ["n", "m", "closed", "direct_re", "direct_im", "abs_diff"], rows, _meta(args), {"summary": {"max_abs_diff": worst}})
    return 0


def _point(args) -> UpperHalfPoint:
    try:
        return UpperHalfPoint(args.x, args.y)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_tables_eisenstein(args) -> int:
    z = _point(args)
    if args.sigma <= 1.0:
        raise ConfigError("--sigma must exceed 1")
    if args.cutoff < 10:
        raise ConfigError("--cutoff must be at least 10")
    fourier = evaluate_eisenstein(z, args.sigma).real
    direct = eisenstein_direct_oracle(z, args.sigma, args.cutoff, tail=not args.no_tail)
    rel = abs(fourier - direct) / abs(direct)
    row = {"x": z.x, "y": z.y, "sigma": args.sigma, "fourier": fourier, "direct": direct, "rel_diff": rel}
    emit(args, list(row), [row], _meta(args))
    return 0


def cmd_tables_reduce(args) -> int:
    z = _point(args)
    res = reduce_to_fundamental_domain(z)
    g = res.gamma
    row = {
        "x": z.x,
        "y": z.y,
        "reduced_x": res.reduced.x,
        "reduced_y": res.reduced.y,
        "a": g.a,
        "b": g.b,
        "c": g.c,
        "d": g.d,
        "automorphy_re": res.automorphy.real,
        "automorphy_im": res.automorphy.imag,
    }
    emit(args, list(row), [row], _meta(args))
    return 0


def random_unimodular(rng: np.random.Generator, bound: int = 6) -> UnimodularMatrix:
    while True:
        c = int(rng.integers(1, bound + 1))
        a = int(rng.integers(-bound, bound + 1))
        if math.gcd(a, c) != 1:
            continue
        # solve a d - b c = 1 for d via the inverse of a mod c
        d = pow(a, -1, c) if c > 1 else 1
        d += c * int(rng.integers(-2, 3))
        b = (a * d - 1) // c
        return UnimodularMatrix(a, b, c, d)


def cmd_tables_invariance(args) -> int:
    form = parse_form(args.form)
    if args.count < 1:
        raise ConfigError("--count must be positive")
    rng = np.random.default_rng(args.seed)
    rows = []
    for i in range(args.count):
        z = UpperHalfPoint(float(rng.uniform(-0.5, 0.5)), float(rng.uniform(0.3, 2.0)))
        g = random_unimodular(rng)
        try:
            v0 = evaluate(form, z)
            v1 = evaluate(form, apply_moebius(g, z))
        except FormDataError as exc:
            raise DataError(str(exc)) from None
        rows.append({"i": i, "x": z.x, "y": z.y, "a": g.a, "b": g.b, "c": g.c, "d": g.d, "abs_diff": abs(abs(v0) - abs(v1)) if args.modulus else abs(v0 - v1)})
    worst = max(r["abs_diff"] for r in rows)
    emit(args, list(rows[0]), rows, _meta(args), {"summary": {"max_abs_diff": worst}})
    return 0


# ---------------------------------------------------------------------------
# argument parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="worker threads; affects speed only")
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK, dest="chunk_size")


def _add_nspec(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", action="append", help="explicit n values (comma separated, repeatable)")
    g.add_argument("--primes", help="primes in a..b")
    g.add_argument("--range", help="integers a..b or a..b..step (composite n included)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="horocycles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("weyl", help="twisted Weyl sums over P(n)")
    _add_common(p)
    _add_nspec(p)
    p.add_argument("--form", required=True, help="delta | eisenstein:<t> | maass:<path>")
    p.add_argument("--l", type=int, default=0)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("discrepancy", help="discrepancy for f1 (x) f2")
    _add_common(p)
    _add_nspec(p)
    p.add_argument("--f1", required=True, help="lines 'l re im'")
    p.add_argument("--f2", required=True, help="header 'constant re im', then 're im <form_spec>'")
    p.add_argument("--fit", action="store_true", help="append a log-log fit")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("fit", help="log-log fit of a CSV table with n and abs columns")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tables", help="oracle tables")
    tables = p.add_subparsers(dest="table", required=True, parser_class=_Parser)

    t = tables.add_parser("ramanujan")
    _add_common(t)
    t.add_argument("--nmax", type=int, default=50)
    t.add_argument("--mmax", type=int, default=50)
    t.set_defaults(func=cmd_tables_ramanujan)

    t = tables.add_parser("eisenstein-compare")
    _add_common(t)
    t.add_argument("--x", type=float, required=True)
    t.add_argument("--y", type=float, required=True)
    t.add_argument("--sigma", type=float, required=True)
    t.add_argument("--cutoff", type=int, default=2000)
    t.add_argument("--no-tail", action="store_true", dest="no_tail", help="raw truncated sum")
    t.set_defaults(func=cmd_tables_eisenstein)

    t = tables.add_parser("reduce")
    _add_common(t)
    t.add_argument("--x", type=float, required=True)
    t.add_argument("--y", type=float, required=True)
    t.set_defaults(func=cmd_tables_reduce)

    t = tables.add_parser("invariance", help="Gamma-invariance at random points")
    _add_common(t)
    t.add_argument("--form", required=True)
    t.add_argument("--count", type=int, default=20)
    t.add_argument("--modulus", action="store_true", help="compare moduli (holomorphic lifts)")
    t.set_defaults(func=cmd_tables_invariance)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "chunk_size", 1) < 1:
            raise ConfigError("--chunk-size must be positive")
        if getattr(args, "threads", 1) < 1:
            raise ConfigError("--threads must be positive")
        return args.func(args)
    except (ConfigError, DataError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"error[{exc.tag}]: {msg}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
