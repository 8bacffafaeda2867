"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Output goes to
``--output`` if given, else to ``$QUASIBELL_OUTPUT_DIR/<command>.<format>`` if
that variable is set, else to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import bell
from .distributions import Direction, JointDistribution, quasi_separation
from .errors import QuasiBellError
from .quantum import QuantumScenario
from .residue import OutcomeKind, QuasiDistanceSpec
from .verify import lhv_minima, oracle_suite, triangle_suite, white_noise_suite

OUTPUT_DIR_ENV = "QUASIBELL_OUTPUT_DIR"

TABLE_HEADER = ["kind", "D", "I_2q", "I_2r", "v_c"]
SCAN_HEADER = ["kind", "N", "D", "R", "I_q", "I_r", "v_c", "ssr"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _kind(text: str) -> OutcomeKind:
    try:
        kind = OutcomeKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if kind is OutcomeKind.CUSTOM:
        raise argparse.ArgumentTypeError("kind must be 1 or 2")
    return kind


def _kind_label(kind: OutcomeKind) -> str:
    return "1" if kind is OutcomeKind.TYPE_I else "2"


def _fmt4(x: float | None) -> str:
    return "" if x is None else f"{x:.4f}"


def _full(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(args: argparse.Namespace, text: str) -> None:
    path = args.output
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / f"{args.command}.{args.format}"
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _d_range(args: argparse.Namespace, lower: int = 2) -> range:
    dmin = lower if args.dmin is None else args.dmin
    if dmin < 2:
        raise UsageError(f"--dmin must be >= 2, got {dmin}")
    if args.dmax < dmin:
        raise UsageError(f"empty dimension range [{dmin}, {args.dmax}]")
    return range(dmin, args.dmax + 1)


# -- commands ------------------------------------------------------------------

def cmd_table(args: argparse.Namespace) -> int:
    rows, records = [], []
    for D in _d_range(args):
        rep = bell.visibility_report(args.kind, 2, D, D)
        rows.append([_kind_label(args.kind), str(D), _fmt4(rep.I_q), _fmt4(rep.I_r), _fmt4(rep.v_c)])
        records.append({"kind": _kind_label(args.kind), "D": D, "I_2q": rep.I_q,
                        "I_2r": rep.I_r, "v_c": rep.v_c})
    _emit(args, _csv_text(TABLE_HEADER, rows) if args.format == "csv" else _json_text(records))
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    rs = args.r
    if min(rs) < 2:
        raise UsageError("Schmidt ranks must be >= 2")
    if max(rs) > args.dmax:
        raise UsageError(f"R={max(rs)} exceeds the largest dimension D={args.dmax}")
    if args.dmin is not None and args.dmin < 2:
        raise UsageError(f"--dmin must be >= 2, got {args.dmin}")
    dmin = 2 if args.dmin is None else args.dmin
    pairs = [(R, D) for R in rs for D in range(max(R, dmin), args.dmax + 1)]
    if not pairs:
        raise UsageError("empty scan")
    reports = bell.sweep(args.kind, args.n, pairs)
    if args.format == "csv":
        rows = [[_kind_label(args.kind), str(r.N), str(r.D), str(r.R), _full(r.I_q), _full(r.I_r),
                 _full(r.v_c), _full(r.ssr)] for r in reports]
        _emit(args, _csv_text(SCAN_HEADER, rows))
    else:
        _emit(args, _json_text([r.to_dict() for r in reports]))
    return EXIT_OK


def _suite_report(args: argparse.Namespace, suites: list) -> int:
    passed = all(s.passed for s in suites)
    report = {"passed": passed, "suites": [s.to_dict() for s in suites]}
    _emit(args, _json_text(report))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify_lhv(args: argparse.Namespace) -> int:
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    dmin = 2 if args.dmin is None else args.dmin
    if args.dmax < dmin:
        raise UsageError(f"empty dimension range [{dmin}, {args.dmax}]")
    try:
        suites = [lhv_minima(args.n, args.dmax, dmin),
                  triangle_suite(args.models, seed=args.seed),
                  white_noise_suite(args.maps, seed=args.seed)]
    except QuasiBellError as exc:
        raise UsageError(str(exc)) from exc
    return _suite_report(args, suites)


def _parse_tamper(text: str):
    parts = text.split(",")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError("--tamper expects n,m,a,b,delta")
    n, m, a, b = (int(p) for p in parts[:4])
    delta = float(parts[4])

    def tamper(sc, n_, m_, a_, b_):
        return delta if (n_, m_, a_, b_) == (n, m, a, b) else 0.0

    return tamper


def cmd_verify_oracle(args: argparse.Namespace) -> int:
    if args.nmax < 2 or args.dmax < 2:
        raise UsageError("--nmax and --dmax must be >= 2")
    return _suite_report(args, [oracle_suite(args.nmax, args.dmax, tamper=args.tamper)])


def cmd_asymptote(args: argparse.Namespace) -> int:
    limit = bell.asymptote_type1()
    points = []
    for D in args.d:
        v = bell.critical_visibility_type1_formula(2, D)
        points.append({"D": D, "v_c": v, "gap": v - limit})
    gaps = [p["gap"] for p in points]
    monotone = all(g > 0 for g in gaps) and all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
    if args.format == "csv":
        rows = [[str(p["D"]), _full(p["v_c"]), _full(p["gap"])] for p in points]
        _emit(args, f"# limit={limit!r} monotone={str(monotone).lower()}\n"
              + _csv_text(["D", "v_c", "gap"], rows))
    else:
        _emit(args, _json_text({"limit": limit, "catalan": bell.CATALAN, "points": points,
                                "monotone": monotone}))
    return EXIT_OK if monotone else EXIT_FAIL


def cmd_eval(args: argparse.Namespace) -> int:
    if args.distribution is not None:
        dist = JointDistribution.from_json(Path(args.distribution).read_text())
        spec = QuasiDistanceSpec.of_kind(args.kind, dist.D)
        out = {"kind": args.kind.value, "D": dist.D,
               "S_AB": quasi_separation(dist, spec, Direction.ALICE_TO_BOB),
               "S_BA": quasi_separation(dist, spec, Direction.BOB_TO_ALICE)}
        _emit(args, _json_text(out))
        return EXIT_OK

    if args.scenario is not None:
        sc = QuantumScenario.from_json(Path(args.scenario).read_text())
    else:
        if args.d is None:
            raise UsageError("eval needs --d, --scenario or --distribution")
        n = args.n if args.expr != "sum" else 2 * args.m
        sc = QuantumScenario.canonical(n, args.d, args.r)
    expr = bell.build_expression(args.expr, N=sc.N, M=args.m)
    if expr.settings > sc.N:
        raise UsageError(f"expression needs {expr.settings} settings per site, scenario has {sc.N}")
    spec = QuasiDistanceSpec.of_kind(args.kind, sc.D)
    i_q = bell.evaluate(expr, bell.QuantumProvider(sc, "auto"), spec)
    i_r = bell.white_noise_value(expr, spec)
    try:
        v_c = bell.critical_visibility(i_q, i_r)
    except QuasiBellError:
        v_c = None
    out = {"expression": expr.name, "terms": str(expr), "kind": args.kind.value,
           "scenario": sc.to_dict(), "I_q": i_q, "I_r": i_r, "v_c": v_c,
           "violation": v_c is not None, "ssr": bell._ssr(spec), "s_max": spec.s_max}
    if args.v is not None:
        out["v"] = args.v
        out["I_v"] = bell.evaluate(expr, bell.NoisyProvider(bell.QuantumProvider(sc, "auto"), sc.D, args.v),
                                   spec)
    _emit(args, _json_text(out))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasibell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt: str) -> None:
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")

    p = sub.add_parser("table", help="Bell values and v_c for N=2, R=D")
    p.add_argument("--kind", type=_kind, required=True, help="1 (linear map) or 2 (Kronecker map)")
    p.add_argument("--dmin", type=int, default=None)
    p.add_argument("--dmax", type=int, required=True)
    common(p, "csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("scan", help="v_c against D for a list of Schmidt ranks")
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--r", type=_int_list, default=[2, 3, 4])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dmin", type=int, default=None)
    p.add_argument("--dmax", type=int, required=True)
    common(p, "csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-lhv", help="local bounds, triangle and white-noise suites")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dmin", type=int, default=None)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--models", type=int, default=1000)
    p.add_argument("--maps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p, "json")
    p.set_defaults(func=cmd_verify_lhv)

    p = sub.add_parser("verify-oracle", help="closed-form probabilities against the oracle")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--dmax", type=int, default=8)
    p.add_argument("--tamper", type=_parse_tamper, default=None, help=argparse.SUPPRESS)
    common(p, "json")
    p.set_defaults(func=cmd_verify_oracle)

    p = sub.add_parser("asymptote", help="large-D limit of the type-I critical visibility")
    p.add_argument("--d", type=_int_list, default=[6, 64, 256, 1024, 4096])
    common(p, "json")
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("eval", help="evaluate one expression on a quantum scenario")
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--expr", choices=("quadrangle", "chained", "sum"), default="chained")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=1, help="blocks for --expr=sum")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--v", type=float, default=None, help="also evaluate at this visibility")
    p.add_argument("--scenario", default=None, help="scenario JSON file")
    p.add_argument("--distribution", default=None, help="joint distribution JSON file")
    common(p, "json")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "v", None) is not None and not 0.0 <= args.v <= 1.0:
        parser.error("--v must lie in [0, 1]")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (QuasiBellError, ValueError) as exc:
        print(f"quasibell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"quasibell: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
