"""Command-line entry point: ``sepkit <command> ...``.

Coefficients are always given in ascending order, constant term first:
``2,-13,17,14`` is 14x^3 + 17x^2 - 13x + 2.

Exit codes: 0 success, 1 domain error or undefined metric, 2 usage error,
3 precision ceiling reached.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import bounds as _bounds
from . import families as _families
from . import roots as _roots
from . import search as _search
from .dyadic import to_decimal
from .errors import PrecisionExhausted, SepkitError
from .poly import (
    discriminant,
    evaluate_exact,
    parse_poly,
    resultant,
    squarefree_part,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _poly(text: str):
    try:
        return parse_poly(text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse coefficients {text!r}: {exc}") from exc


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _down(x) -> str:
    return to_decimal(x, 17, "down")


def _up(x) -> str:
    return to_decimal(x, 17, "up")


def _ceiling(args) -> int:
    return args.precision_ceiling or _roots.default_ceiling()


# ------------------------------------------------------------ commands


def cmd_poly(args):
    P = _poly(args.p)
    if args.action == "eval":
        t = _rational(args.at)
        v = evaluate_exact(P, t)
        return {"value": str(v)}, 0, EXIT_OK
    if args.action == "resultant":
        if args.q is None:
            raise UsageError("poly resultant needs --q")
        return {"resultant": str(resultant(P, _poly(args.q)))}, 0, EXIT_OK
    if args.action == "disc":
        if P.is_zero or P.degree() < 1:
            raise SepkitError("discriminant needs degree >= 1")
        return {"discriminant": str(discriminant(P))}, 0, EXIT_OK
    if P.is_zero or P.degree() < 1:
        raise SepkitError("squarefree part needs degree >= 1")
    Q = squarefree_part(P)
    return {"squarefree": list(map(str, Q.coeffs)), "poly": str(Q)}, 0, EXIT_OK


def _separation_payload(res: _roots.SeparationResult) -> dict:
    out = {"status": res.status}
    if res.value is not None:
        out.update({
            "lower": _down(res.value.lo),
            "upper": _up(res.value.hi),
            "witness": list(res.witness),
            "witness_real": list(res.witness_real),
            "rounding": {"lower": "down", "upper": "up"},
        })
    out["squarefree_substituted"] = res.squarefree_substituted
    if res.note:
        out["note"] = res.note
    return out


def cmd_sep(args):
    P = _poly(args.poly)
    tol = _rational(args.tol)
    res = _roots.sep(P, tol=tol, ceiling=_ceiling(args))
    return _separation_payload(res), res.precision, EXIT_OK if res.status == _roots.POSITIVE else EXIT_DOMAIN


def cmd_abssep(args):
    P = _poly(args.poly)
    tol = _rational(args.tol)
    fn = _roots.abssep_real if args.real_only else _roots.abssep
    res = fn(P, tol=tol, ceiling=_ceiling(args))
    return _separation_payload(res), res.precision, EXIT_OK if res.status == _roots.POSITIVE else EXIT_DOMAIN


def cmd_bounds(args):
    maxmod = _rational(args.maxmod)
    P = _poly(args.poly) if args.poly else None
    r = _bounds.bound_report(args.degree, args.height, maxmod, args.precision, P)
    out = {
        "mahler_pair": _down(r.mahler_pair),
        "thm1": _down(r.thm1),
        "thm2": _down(r.thm2) if r.thm2 is not None else None,
        "gs_exponent": str(r.gs_exponent),
        "gs_certifying": r.gs_certifying,
        "landau_upper": _up(r.landau_upper),
        "landau_upper_note": ("sqrt(sum a_k^2) of --poly, an upper bound for M(P)" if P is not None
                              else "sqrt(d+1)*H, which dominates sqrt(sum a_k^2) for every P of this degree and height"),
        "gelfond": str(r.gelfond_factor_height),
        "rounding": {"mahler_pair": "down", "thm1": "down", "thm2": "down", "landau_upper": "up"},
    }
    return out, r.precision, EXIT_OK


def _variant(text: str) -> str:
    return {"paper": _families.PAPER, "alt-odd": _families.ALTERNATE_ODD,
            "alternate_odd": _families.ALTERNATE_ODD}[text]


def _sweep_csv(rows) -> str:
    lines = ["d,M,abssep_lower,abssep_upper,ratio_to_M_pow"]
    for r in rows:
        lines.append(f"{r.d},{r.M},{_down(r.abssep_lower)},{_up(r.abssep_upper)},{_down(r.ratio_to_M_pow)}")
    return "\n".join(lines) + "\n"


GNUPLOT = """set logscale xy
set xlabel "M"
set ylabel "abssep_real"
set datafile separator ","
set key top right
plot "{csv}" using 2:3 skip 1 with linespoints title "lower edge, d = {d}", \\
     "{csv}" using 2:(($2)**(-{e})) skip 1 with lines title "M^(-{e})"
"""


def cmd_family(args):
    spec = _families.FamilySpec(args.d, args.m, _variant(args.variant)) if args.action != "sweep" else None
    if args.action == "build":
        P = _families.build(spec)
        return {"coeffs": list(map(str, P.coeffs)), "poly": str(P), "height": str(P.height())}, 0, EXIT_OK
    if args.action == "verify":
        rep = _families.verify_family(spec, C=_rational(args.C))
        out = {
            "passed": rep.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks],
        }
        if rep.abssep_real is not None and rep.abssep_real.value is not None:
            out["abssep_lower"] = _down(rep.abssep_real.value.lo)
            out["abssep_upper"] = _up(rep.abssep_real.value.hi)
        return out, rep.abssep_real.precision if rep.abssep_real else 0, EXIT_OK if rep.passed else EXIT_DOMAIN
    try:
        m_list = [int(x) for x in args.m_list.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --m-list {args.m_list!r}") from exc
    rows = _families.sweep(args.d, m_list, _variant(args.variant))
    out = {"rows": [{"d": r.d, "M": r.M, "abssep_lower": _down(r.abssep_lower), "abssep_upper": _up(r.abssep_upper),
                     "ratio_to_M_pow": _down(r.ratio_to_M_pow)} for r in rows]}
    if args.out:
        path = Path(args.out)
        path.write_text(_sweep_csv(rows))
        out["csv"] = str(path)
        if args.emit_gnuplot:
            gp = path.with_suffix(".gp")
            gp.write_text(GNUPLOT.format(csv=path.name, d=args.d, e=args.d - 1))
            out["gnuplot"] = str(gp)
    elif args.emit_gnuplot:
        raise UsageError("--emit-gnuplot needs --out")
    if args.format == "csv":
        out["_csv"] = _sweep_csv(rows)
    return out, 0, EXIT_OK


def cmd_search(args):
    box = _search.SearchBox(args.max_degree, args.bound)
    res = _search.search_records(box, args.metric, top_k=args.top, checkpoint_path=args.checkpoint,
                                 workers=args.workers)
    out = {
        "records": [r.to_json() for r in res.records],
        "counters": res.counters,
        "screen_margin_ok": res.margin_ok,
    }
    if args.out:
        js, cs = _search.write_records(res.records, args.out)
        out["files"] = [str(js), str(cs)]
    if args.unique_below is not None:
        t = _rational(args.unique_below)
        out["unique_below"] = {"threshold": args.unique_below,
                               "count": _search.uniqueness_check(box, args.metric, t, workers=args.workers)}
    return out, 0, EXIT_OK


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--precision-ceiling", type=int, default=None,
                        help="bits; overrides SEPKIT_PRECISION_CEILING")

    p = argparse.ArgumentParser(prog="sepkit", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("poly", parents=[common], help="exact polynomial operations")
    pp.add_argument("action", choices=("eval", "resultant", "disc", "squarefree"))
    pp.add_argument("--p", required=True, help="ascending coefficients")
    pp.add_argument("--q", help="second polynomial for resultant")
    pp.add_argument("--at", default="0", help="rational evaluation point, e.g. -1/10")
    pp.set_defaults(func=cmd_poly)

    for name, func in (("sep", cmd_sep), ("abssep", cmd_abssep)):
        sp = sub.add_parser(name, parents=[common], help=f"certified {name}")
        sp.add_argument("--poly", required=True)
        sp.add_argument("--real-only", action="store_true", help="restrict to pairs of real roots")
        sp.add_argument("--tol", default=str(_roots.DEFAULT_TOL), help="relative enclosure width")
        sp.set_defaults(func=func)

    bp = sub.add_parser("bounds", parents=[common], help="every separation bound for (d, H)")
    bp.add_argument("--degree", type=int, required=True)
    bp.add_argument("--height", type=int, required=True)
    bp.add_argument("--maxmod", default="1")
    bp.add_argument("--precision", type=int, default=_bounds.DEFAULT_PREC)
    bp.add_argument("--poly", help="use sqrt(sum a_k^2) of this polynomial for landau_upper")
    bp.set_defaults(func=cmd_bounds)

    fam_common = argparse.ArgumentParser(add_help=False)
    fam_common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    fam_common.add_argument("--precision-ceiling", type=int, default=None)
    fp = sub.add_parser("family", parents=[fam_common], help="extremal families")
    fp.add_argument("action", choices=("build", "verify", "sweep"))
    fp.add_argument("--d", type=int, required=True)
    fp.add_argument("--m", type=int, default=None)
    fp.add_argument("--m-list", default="100,1000,10000")
    fp.add_argument("--variant", choices=("paper", "alt-odd"), default="paper")
    fp.add_argument("--C", default=str(_families.DEFAULT_C), help="constant of the abssep scale check")
    fp.add_argument("--out", help="CSV path for sweep")
    fp.add_argument("--emit-gnuplot", action="store_true", help="write a gnuplot script next to the CSV")
    fp.set_defaults(func=cmd_family)

    sp = sub.add_parser("search", parents=[common], help="exhaustive record search")
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--metric", choices=_search.METRICS, required=True)
    sp.add_argument("--top", type=int, default=1)
    sp.add_argument("--checkpoint")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="records JSON path; records.csv is written alongside")
    sp.add_argument("--unique-below", help="also count polynomials with value below this threshold")
    sp.set_defaults(func=cmd_search)
    return p


def _inputs(args) -> dict:
    skip = {"func", "format", "command", "action"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _text(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            lines += _text(v, f"{prefix}{k}.") if isinstance(v, (dict, list)) else [f"{prefix}{k}: {_scalar(v)}"]
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            lines.append(f"{prefix.rstrip('.')}: {' '.join(_scalar(v) for v in obj)}")
        else:
            for i, v in enumerate(obj):
                lines += _text(v, f"{prefix}{i}.")
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "null" if v is None else str(v)


def emit(envelope: dict, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "csv" and "_csv" in envelope["result"]:
        stream.write(envelope["result"]["_csv"])
        return
    envelope["result"].pop("_csv", None)
    if fmt == "text":
        stream.write("\n".join(_text(envelope)) + "\n")
    else:
        stream.write(json.dumps(envelope, indent=2, sort_keys=False) + "\n")


_VALUE_OPTIONS = ("--poly", "--p", "--q", "--at", "--maxmod", "--tol", "--unique-below")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--poly -1,0,1`` into ``--poly=-1,0,1`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_USAGE
    fmt = args.format
    saved = os.environ.get("SEPKIT_PRECISION_CEILING")
    if args.precision_ceiling:
        os.environ["SEPKIT_PRECISION_CEILING"] = str(args.precision_ceiling)
    try:
        if args.command == "family" and args.action != "sweep" and args.m is None:
            raise UsageError("family build/verify needs --m")
        result, prec, code = args.func(args)
    except UsageError as exc:
        print(f"sepkit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        result, prec, code = {"status": "undecided", "error": str(exc)}, _ceiling(args), EXIT_PRECISION
    except (SepkitError, ValueError) as exc:
        result, prec, code = {"status": "error", "error": str(exc)}, 0, EXIT_DOMAIN
    finally:
        # the override is for this call only; main() may run inside a longer-lived process
        if saved is None:
            os.environ.pop("SEPKIT_PRECISION_CEILING", None)
        else:
            os.environ["SEPKIT_PRECISION_CEILING"] = saved
    envelope = {
        "command": args.command + (f" {args.action}" if hasattr(args, "action") else ""),
        "inputs": _inputs(args),
        "result": result,
        "precision_used": int(prec),
        "version": __version__,
    }
    emit(envelope, fmt)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
