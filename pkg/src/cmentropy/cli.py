"""Command-line front end.

Exit codes: 0 when every check passes (or the command only reports),
1 when a mathematical violation is found, 2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np

from . import __version__
from .basis import TruncationPolicy, basis, validate_params
from .checks import conjecture33_scan
from .derivatives import DerivativeRequest, evaluate_derivative
from .entropies import renyi2, shannon, sum_squares, tsallis2
from .errors import EntropyError, ParameterError
from .suites import SIGN_TOL, SUITES, run_all, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

QUANTITIES = {"H": shannon, "S": sum_squares, "R": renyi2, "T": tsallis2}
P_HEAD = 3


class UsageError(Exception):
    pass


# -- grids and rows ----------------------------------------------------------

def _x_grid(args) -> list[float]:
    if args.x is not None:
        return [float(v) for v in args.x]
    if args.xmin is None or args.xmax is None:
        raise UsageError("give --x values or --xmin/--xmax")
    if not args.xmin < args.xmax:
        raise UsageError("grid needs xmin < xmax")
    if args.points < 2:
        raise UsageError("grid needs at least 2 points")
    if args.spacing == "geometric":
        if args.xmin <= 0:
            raise UsageError("geometric grid needs xmin > 0")
        return [float(v) for v in np.geomspace(args.xmin, args.xmax, args.points)]
    return [float(v) for v in np.linspace(args.xmin, args.xmax, args.points)]


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _quantity_cells(p, x, quantities, policy) -> dict:
    row = {}
    errors = []
    for q in quantities:
        try:
            v = QUANTITIES[q](p, x, policy)
            row[q], row[f"{q}_err"] = v.value, v.error_bound
        except EntropyError as exc:
            row[q], row[f"{q}_err"] = None, None
            errors.append(f"{q}:{type(exc).__name__}")
    row["error"] = ";".join(errors)
    return row


def _eval_row(task) -> dict:
    c, n, x, quantities, abs_tol, max_terms, head = task
    p = validate_params(c, n)
    policy = TruncationPolicy(abs_tol, max_terms)
    row = {"c": c, "n": n, "x": x}
    if not p.contains(x):
        for k in range(head):
            row[f"p{k}"] = None
        for q in quantities:
            row[q], row[f"{q}_err"] = None, None
        row["error"] = "DomainViolation"
        return row
    for k in range(head):
        row[f"p{k}"] = basis(p, k, x)
    row.update(_quantity_cells(p, x, quantities, policy))
    return row


def _map(fn, tasks, jobs):
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


# -- output -------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _rows_text(rows: list[dict], fmt: str) -> str:
    if not rows:
        return "[]\n" if fmt == "json" else ""
    cols = list(rows[0])
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in cols])
        return buf.getvalue()
    cells = [[c for c in cols]] + [[_human(r[c]) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
    return "".join("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n" for row in cells)


def _human(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_document(config: dict, outcomes, timing: bool) -> dict:
    findings = []
    for o in outcomes:
        findings.extend(f.to_dict(o.report.suite) for f in o.report.findings)
    summary = {
        "suites": [dict(o.report.summary(), id=o.suite, classification=o.classification)
                   for o in outcomes],
        "passed": all(o.classification != "violation" for o in outcomes),
    }
    doc = {"config": config, "findings": findings, "summary": summary}
    meta = {"version": __version__}
    if timing:
        meta["wall_time"] = {o.suite: round(o.wall_time, 6) for o in outcomes}
    doc["meta"] = meta
    return doc


def _report_text(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        cols = ["suite", "check", "x", "order", "margin", "tolerance", "ok"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for f in doc["findings"]:
            w.writerow([_fmt(f[c]) for c in cols])
        return buf.getvalue()
    lines = []
    for s in doc["summary"]["suites"]:
        worst = "n/a" if s["worst_margin"] is None else f"{s['worst_margin']:.3e}"
        where = "" if s["worst_x"] is None else f" at x={s['worst_x']:.6g} order {s['worst_order']}"
        lines.append(f"{s['classification'].upper():12s} {s['id']:16s} findings={s['findings']:<6d} "
                     f"violations={s['violations']:<4d} worst margin={worst}{where}")
        if s["worst_check"]:
            lines.append(f"{'':12s} worst check: {s['worst_check']}")
    lines.append("RESULT: " + ("PASS" if doc["summary"]["passed"] else "VIOLATION"))
    if "wall_time" in doc["meta"]:
        total = sum(doc["meta"]["wall_time"].values())
        lines.append(f"wall time: {total:.2f} s")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------

def cmd_eval(args) -> int:
    p = validate_params(args.c, args.n)
    tasks = [(p.c, p.n, x, "HSRT", args.abs_tol, args.max_terms, P_HEAD) for x in _x_grid(args)]
    rows = _map(_eval_row, tasks, args.jobs)
    for r in rows:
        del r["c"], r["n"]
    _emit(_rows_text(rows, args.format), args.output)
    return EXIT_OK


def cmd_deriv(args) -> int:
    p = validate_params(args.c, args.n)
    policy = TruncationPolicy(args.abs_tol, args.max_terms)
    method = "exact" if args.method == "exact" else "finite_difference"
    rows = []
    for x in _x_grid(args):
        row = {"x": x, "order": args.order, "method": args.method}
        try:
            req = DerivativeRequest(p, x, args.order, method)
            row["value"], row["error"] = evaluate_derivative(req, policy), ""
        except EntropyError as exc:
            row["value"], row["error"] = None, f"{type(exc).__name__}: {exc}"
        rows.append(row)
    _emit(_rows_text(rows, args.format), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    params = None
    if args.c is not None or args.n is not None:
        if args.c is None or args.n is None:
            raise UsageError("give both --c and --n, or neither")
        params = validate_params(args.c, args.n)
    if args.suite == "all":
        outcomes = run_all(params, args.quick, args.tol)
    else:
        outcomes = [run_suite(args.suite, params, args.quick, args.tol)]
    config = {"command": "check", "suite": args.suite, "c": args.c, "n": args.n,
              "quick": args.quick, "tolerance": args.tol}
    doc = _report_document(config, outcomes, not args.no_timing)
    _emit(_report_text(doc, args.format), args.output)
    return EXIT_OK if doc["summary"]["passed"] else EXIT_VIOLATION


def cmd_scan(args) -> int:
    p = validate_params(args.c, args.n)
    if p.c >= 0:
        raise UsageError("scan-conjecture applies to c < 0 only")
    if args.points < 3:
        raise UsageError("scan needs at least 3 points")
    start = time.perf_counter()
    report = conjecture33_scan(p, args.points)
    elapsed = time.perf_counter() - start
    worst = report.worst
    negatives = sum(1 for f in report.findings if f.margin < 0)
    summary = {"min_curvature": worst.margin, "argmin_x": worst.x,
               "negative_points": negatives, "points": args.points, "report_only": True}
    if args.format == "json":
        doc = {"config": {"command": "scan-conjecture", "c": p.c, "n": p.n, "points": args.points},
               "findings": [{"x": f.x, "curvature": f.margin, "is_min": f is worst}
                            for f in report.findings],
               "summary": summary,
               "meta": {"version": __version__}}
        if not args.no_timing:
            doc["meta"]["wall_time"] = round(elapsed, 6)
        text = json.dumps(doc, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "log_s_curvature", "is_min"])
        for f in report.findings:
            w.writerow([repr(f.x), repr(f.margin), int(f is worst)])
        text = buf.getvalue()
    else:
        text = (f"log S curvature scan c={p.c:g} n={p.n:g} ({args.points} points, report only)\n"
                f"minimum {worst.margin:.10g} at x={worst.x:.6g}\n"
                f"negative points: {negatives}\n")
    _emit(text, args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    quantities = [q.strip() for q in args.quantities.split(",") if q.strip()]
    unknown = [q for q in quantities if q not in QUANTITIES]
    if unknown or not quantities:
        raise UsageError(f"unknown quantities {unknown}; choose from {','.join(QUANTITIES)}")
    cs = [v for group in args.c for v in group]
    ns = [v for group in args.n for v in group]
    families = [validate_params(c, n) for c in cs for n in ns]
    xs = _x_grid(args)
    tasks = [(p.c, p.n, x, quantities, args.abs_tol, args.max_terms, 0) for p in families for x in xs]
    rows = _map(_eval_row, tasks, args.jobs)
    _emit(_rows_text(rows, args.format), args.output)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_grid(sp) -> None:
    sp.add_argument("--x", type=float, nargs="+", help="explicit x values")
    sp.add_argument("--xmin", type=float)
    sp.add_argument("--xmax", type=float)
    sp.add_argument("--points", type=int, default=25)
    sp.add_argument("--spacing", choices=("linear", "geometric"), default="linear")


def _add_common(sp, series: bool = True) -> None:
    sp.add_argument("--format", choices=("human", "csv", "json"), default="human")
    sp.add_argument("--output", help="write to this file instead of standard output")
    if series:
        sp.add_argument("--abs-tol", type=float, default=1e-12, help="series tail tolerance")
        sp.add_argument("--max-terms", type=int, default=100_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmentropy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="basis head and H, S, R, T with error bounds")
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--n", type=float, required=True)
    _add_grid(sp)
    _add_common(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("deriv", help="derivatives of the Shannon entropy")
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--method", choices=("exact", "fd"), default="exact")
    _add_grid(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_deriv)

    sp = sub.add_parser("check", help="run a verification suite")
    sp.add_argument("suite", choices=(*SUITES, "all"))
    sp.add_argument("--c", type=float)
    sp.add_argument("--n", type=float)
    sp.add_argument("--quick", action="store_true", help="reduced grids")
    sp.add_argument("--tol", type=float, default=SIGN_TOL, help="relative sign tolerance")
    sp.add_argument("--no-timing", action="store_true", help="omit wall times from the report")
    _add_common(sp, series=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("scan-conjecture", help="curvature of log S for c < 0 (report only)")
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--points", type=int, default=199)
    sp.add_argument("--no-timing", action="store_true")
    _add_common(sp, series=False)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("sweep", help="quantities over a (c, n, x) matrix")
    sp.add_argument("--c", type=_float_list, nargs="+", required=True,
                    help="c values, space or comma separated (use --c=-1,0 for a leading minus)")
    sp.add_argument("--n", type=_float_list, nargs="+", required=True, help="n values")
    sp.add_argument("--quantities", default="H,S,R,T")
    _add_grid(sp)
    _add_common(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tol", 1.0) <= 0 or getattr(args, "abs_tol", 1.0) <= 0:
        print("error: tolerances must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
