"""Command-line interface: plot-ready data for every law and experiment.

Exit codes: 0 success, 2 usage error, 3 numerical accuracy failure,
4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__, distribution, frobenius, weyl
from .errors import AccuracyError, CountingError, DomainError, InvalidCurveError, ScanTooLargeError
from .symmetric import PalindromicPolynomial, SymmetricPoint, in_sigma

EXIT_OK, EXIT_USAGE, EXIT_ACCURACY, EXIT_CONSISTENCY = 0, 2, 3, 4

_LAW_G = {"tau": (1, 2, 3), "rho": (2,), "tau2": (2,), "chi2": (2,)}


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _header_flags(args) -> dict:
    # destinations do not change the data, so they stay out of the header
    skip = {"func", "command", "out", "summary"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None and v is not False}


def _header_lines(args) -> list[str]:
    flags = " ".join(f"--{k.replace('_', '-')}={v}" for k, v in _header_flags(args).items())
    return [f"# usptrace {__version__} {args.command}", f"# flags: {flags}"]


def _header_json(args) -> dict:
    return {
        "tool": "usptrace",
        "version": __version__,
        "subcommand": args.command,
        "flags": {k: (v if isinstance(v, (int, str, bool)) else str(v)) for k, v in _header_flags(args).items()},
    }


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _emit_table(args, columns: list[str], rows, json_values=None) -> None:
    with _output(args.out) as fh:
        if args.format == "json":
            values = json_values if json_values is not None else [
                {c: (v if isinstance(v, (int, str)) else _fmt(v)) for c, v in zip(columns, row)} for row in rows
            ]
            json.dump({"header": _header_json(args), "values": values}, fh, indent=1)
            fh.write("\n")
            return
        for line in _header_lines(args):
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple)):
        return ":".join(_cell(x) for x in v)
    if isinstance(v, (int, np.integer)):
        return str(v)
    return _fmt(v)


def _emit_json(args, payload) -> None:
    with _output(args.out) as fh:
        json.dump({"header": _header_json(args), "values": payload}, fh, indent=1)
        fh.write("\n")


def _law_tag(parser, which: str, g: int) -> str:
    if g not in _LAW_G[which]:
        parser.error(f"--which {which} is not available for g={g} (allowed: {_LAW_G[which]})")
    return f"tau_g{g}" if which == "tau" else which


def _grid(args, tag):
    lo, hi = distribution.SUPPORT[tag]
    xmin = lo if args.xmin is None else args.xmin
    xmax = hi if args.xmax is None else args.xmax
    if args.n < 1 or xmax < xmin:
        raise DomainError("need --n >= 1 and --xmax >= --xmin")
    return np.linspace(xmin, xmax, args.n) if args.n > 1 else np.array([xmin])


# ---------------------------------------------------------------------------
# subcommands


def cmd_density(args, parser) -> int:
    tag = _law_tag(parser, args.which, args.g)
    if args.method != "auto" and tag != "tau_g2" and not (tag == "tau_g3" and args.method in ("slice", "reconstruct")):
        parser.error(f"--method {args.method} is not available for {tag}")
    xs = _grid(args, tag)
    curve = distribution.density_curve(tag, xs, args.method)
    _emit_table(args, ["x", "f"], zip(curve.xs, curve.ys))
    return EXIT_OK


def cmd_cdf(args, parser) -> int:
    tag = _law_tag(parser, args.which, args.g)
    xs = _grid(args, tag)
    ys = [distribution.cdf(tag, x) for x in xs]
    _emit_table(args, ["x", "F"], zip(xs, ys))
    return EXIT_OK


def cmd_charfn(args, parser) -> int:
    if args.n < 1 or args.tmax < args.tmin:
        raise DomainError("need --n >= 1 and --tmax >= --tmin")
    ts = np.linspace(args.tmin, args.tmax, args.n) if args.n > 1 else np.array([args.tmin])
    ys = [distribution.charfn(args.which, t, args.method) for t in ts]
    _emit_table(args, ["t", "phi"], zip(ts, ys))
    return EXIT_OK


def _exact(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    return int(v)


def cmd_moments(args, parser) -> int:
    tag = _law_tag(parser, args.which, args.g)
    if args.count < 1:
        raise DomainError("--count must be at least 1")
    seq = distribution.moments(tag, args.count - 1, args.method)
    values = [_exact(v) for v in seq.values]
    if args.format == "json":
        _emit_json(args, values)
    else:
        _emit_table(args, ["n", "M"], [(n, str(v)) for n, v in enumerate(values)])
    return EXIT_OK


def cmd_sample(args, parser) -> int:
    if args.g not in weyl.SUPPORTED_G:
        parser.error("--g must be 1, 2 or 3")
    s = weyl.sample(args.g, args.n, args.seed, threads=args.threads)
    cols = [f"theta{j + 1}" for j in range(args.g)] + [f"t{j + 1}" for j in range(args.g)] + ["trace"]
    data = np.column_stack([s.theta, s.t, s.trace])
    if args.format == "json":
        _emit_json(args, {"columns": cols, "rows": [[_fmt(v) for v in row] for row in data]})
        return EXIT_OK
    with _output(args.out) as fh:
        for line in _header_lines(args):
            fh.write(line + "\n")
        fh.write(",".join(cols) + "\n")
        np.savetxt(fh, data, fmt="%.17g", delimiter=",")
    return EXIT_OK


def _parse_numbers(text: str):
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            out.append(int(part))
        except ValueError:
            out.append(float(Fraction(part)) if "/" in part else float(part))
    return out


def cmd_alcove(args, parser) -> int:
    try:
        s = _parse_numbers(args.s)
    except ValueError:
        parser.error("--s must be a comma-separated list of numbers")
    if len(s) != args.g:
        parser.error(f"--s needs exactly g={args.g} values")
    report = in_sigma(SymmetricPoint(tuple(s)))
    d = report.to_dict()
    if args.format == "json":
        _emit_json(args, d)
    else:
        _emit_table(args, ["in_pi", "in_theta", "in_sigma"], [(str(d["in_pi"]).lower(), str(d["in_theta"]).lower(), str(d["in_sigma"]).lower())])
    return EXIT_OK


def cmd_weil_validate(args, parser) -> int:
    if args.a is not None:
        a = _parse_numbers(args.a)
        try:
            poly = PalindromicPolynomial(tuple(a))
        except DomainError as exc:
            parser.error(str(exc))
        payload = {"a": [str(x) for x in a], "valid": frobenius.validate_weil(poly)}
    elif args.p is not None and args.f is not None:
        curve = frobenius.HyperellipticCurve(args.p, tuple(int(c) for c in args.f.split(":")))
        w = frobenius.weil_data(curve)
        payload = {
            "p": w.p, "f": curve.packed, "N1": w.N1, "N2": w.N2, "c1": w.c1, "c2": w.c2,
            "a1": _fmt(w.a1), "a2": _fmt(w.a2), "valid": frobenius.validate_weil(w),
        }
    elif args.p is not None and args.c1 is not None and args.c2 is not None:
        w = frobenius.WeilData(args.p, args.p + 1 - args.c1, 0, args.c1, args.c2)
        payload = {"p": w.p, "c1": w.c1, "c2": w.c2, "a1": _fmt(w.a1), "a2": _fmt(w.a2), "valid": frobenius.validate_weil(w)}
    else:
        parser.error("give --a, or --p with --f, or --p with --c1 and --c2")
    if args.format == "json":
        _emit_json(args, payload)
    else:
        keys = list(payload)
        _emit_table(args, keys, [[str(payload[k]).lower() if isinstance(payload[k], bool) else payload[k] for k in keys]])
    return EXIT_OK


def _corrupt(e: frobenius.EmpiricalDistribution) -> frobenius.EmpiricalDistribution:
    """Shift one N1 by an even amount large enough to leave the Weil range."""
    n1 = e.n1.copy()
    n1[0] += 2 * (int(4 * np.sqrt(e.p)) + 2)
    return e.with_counts(n1, e.n2)


def cmd_curves(args, parser) -> int:
    if args.mode == "sample" and not args.n:
        parser.error("--mode sample needs --n")
    e = frobenius.scan_curves(args.p, args.mode, args.n, args.seed, threads=args.threads)
    if args.inject_corrupt_count:
        e = _corrupt(e)
    summary = frobenius.compare_to_theory(e).to_dict()
    if args.format == "json":
        _emit_json(args, summary)
    else:
        with _output(args.out) as fh:
            for line in _header_lines(args):
                fh.write(line + "\n")
            e.write_csv(fh)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            json.dump({"header": _header_json(args), "values": summary}, fh, indent=1)
            fh.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    parser = argparse.ArgumentParser(prog="usptrace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"usptrace {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def grid_opts(p):
        p.add_argument("--which", choices=tuple(_LAW_G), default="tau")
        p.add_argument("--g", type=int, default=2)
        p.add_argument("--xmin", type=float)
        p.add_argument("--xmax", type=float)
        p.add_argument("--n", type=int, default=201, help="number of grid points")

    p = sub.add_parser("density", parents=[common], help="density on a grid")
    grid_opts(p)
    p.add_argument("--method", default="auto",
                   choices=distribution.TAU_G2_METHODS + ("reconstruct",))
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("cdf", parents=[common], help="distribution function on a grid")
    grid_opts(p)
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("charfn", parents=[common], help="characteristic function on a grid")
    p.add_argument("--which", choices=("tau_g1", "tau_g2", "tau_g3", "rho"), default="tau_g2")
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--method", choices=("auto", "bessel", "series", "quadrature"), default="auto")
    p.set_defaults(func=cmd_charfn)

    p = sub.add_parser("moments", parents=[common], help="moment sequence M_0, M_1, ...")
    p.add_argument("--which", choices=tuple(_LAW_G), default="tau")
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--count", type=int, default=11)
    p.add_argument("--method", choices=("exact", "quadrature", "series"), default="exact")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("sample", parents=[common], help="Weyl-measure samples of conjugacy classes")
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--n", type=int, default=1000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("alcove", parents=[common], help="symmetric alcove membership of s")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--s", required=True, help="comma-separated s_1,...,s_g")
    p.set_defaults(func=cmd_alcove)

    p = sub.add_parser("weil-validate", parents=[common], help="check a Weil polynomial or a curve")
    p.add_argument("--a", help="unitarised half-coefficients 1,a1,a2")
    p.add_argument("--p", type=int)
    p.add_argument("--f", help="curve coefficients c0:c1:...:c6")
    p.add_argument("--c1", type=int)
    p.add_argument("--c2", type=int)
    p.set_defaults(func=cmd_weil_validate)

    p = sub.add_parser("curves", parents=[common], help="scan genus-2 curves and compare with USp(4)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--n", type=int, help="number of sampled curves")
    p.add_argument("--summary", help="also write the JSON summary to this path")
    p.add_argument("--inject-corrupt-count", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except AccuracyError as exc:
        print(f"usptrace: accuracy failure: {exc} (best estimate {exc.best})", file=sys.stderr)
        return EXIT_ACCURACY
    except CountingError as exc:
        print(f"usptrace: consistency failure: validate_weil rejected a count: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (DomainError, InvalidCurveError, ScanTooLargeError) as exc:
        print(f"usptrace: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
