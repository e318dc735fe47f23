"""Command-line entry point.

Subcommands map one-to-one onto library operations:

    count aux | nh | auxeq     auxiliary-inequality counting
    classify                   dyadic class histogram over a box (+ figure)
    trichotomy                 covering trichotomy certificate
    davenport verify | dichotomy
    circle count | series | report

Exit codes: 0 success (Inconclusive outcomes are data, still 0), 1 domain
error, 2 usage error. Given a fixed seed, every invocation is byte-identical
across runs and across thread counts.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import circle as circlemod
from . import counting, davenport, reportio
from .errors import CubicFormError
from .forms import load_forms


def _int_list(text: str):
    return [int(t) for t in text.split(",") if t]


def _default_threads() -> int:
    env = os.environ.get("CUBIC_AUX_THREADS")
    if env:
        return max(1, int(env))
    return 1


def _load_single_form(path):
    forms = load_forms(path)
    if len(forms) != 1:
        raise CubicFormError(f"expected a single form in {path}, found {len(forms)}")
    return forms[0]


def _emit(args, json_obj, csv_rows):
    """Write CSV (default) or JSON depending on --format; honor --out."""
    if args.format == "json":
        text = reportio.render_json(json_obj)
    else:
        text = reportio.render_csv(csv_rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cubicforms",
        description="Counting, covering, and circle-method experiments for systems of cubic forms.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("count", help="auxiliary-inequality counts")
    cs = pc.add_subparsers(dest="what", required=True)

    p = cs.add_parser("aux", help="N^aux(B): pairs (x, y) with ||H_c(x) y|| < B over the box")
    p.add_argument("--form", required=True)
    p.add_argument("--B", required=True, type=_int_list)
    p.add_argument("--strict", dest="strictness", action="store_const",
                   const=counting.STRICT, default=counting.STRICT)
    p.add_argument("--weak", dest="strictness", action="store_const", const=counting.WEAK)
    p.add_argument("--threads", type=int, default=None)
    _add_output_args(p)

    p = cs.add_parser("nh", help="N_H(B) for H = H_c(x) at a given x")
    p.add_argument("--form", required=True)
    p.add_argument("--x", required=True, type=_int_list)
    p.add_argument("--B", required=True, type=_int_list)
    p.add_argument("--strict", dest="strictness", action="store_const",
                   const=counting.STRICT, default=counting.WEAK)
    p.add_argument("--weak", dest="strictness", action="store_const", const=counting.WEAK)
    _add_output_args(p)

    p = cs.add_parser("auxeq", help="pairs with H_c(x) y = 0 exactly")
    p.add_argument("--form", required=True)
    p.add_argument("--B", required=True, type=_int_list)
    _add_output_args(p)

    p = sub.add_parser("classify", help="dyadic class histogram over the box")
    p.add_argument("--form", required=True)
    p.add_argument("--B", required=True, type=int)
    p.add_argument("--histogram", action="store_true",
                   help="render a bar-chart PNG next to the delimited output")
    _add_output_args(p)

    p = sub.add_parser("trichotomy", help="covering trichotomy certificate for the pigeonhole class")
    p.add_argument("--form", required=True)
    p.add_argument("--B", required=True, type=int)
    p.add_argument("--C", required=True, type=float)
    p.add_argument("--sigma", required=True, type=int)
    _add_output_args(p)

    pd = sub.add_parser("davenport", help="minor-built near-null vectors and the dichotomy")
    ds = pd.add_subparsers(dest="what", required=True)

    p = ds.add_parser("verify", help="exact identity suite for H(x) y^(i) = signed (b+1)-minors")
    p.add_argument("--form", required=True)
    p.add_argument("--b", required=True, type=int)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)

    p = ds.add_parser("dichotomy", help="count bound or subspace pair")
    p.add_argument("--form", required=True)
    p.add_argument("--B", required=True, type=int)
    p.add_argument("--C", required=True, type=float)
    p.add_argument("--sigma", required=True, type=int)
    _add_output_args(p)

    pr = sub.add_parser("circle", help="Hardy-Littlewood checks for diagonal systems")
    rs = pr.add_subparsers(dest="what", required=True)

    p = rs.add_parser("count", help="exact N(P) on the box")
    p.add_argument("--form", required=True)
    p.add_argument("--P", required=True, type=_int_list)
    _add_output_args(p)

    p = rs.add_parser("series", help="truncated singular series")
    p.add_argument("--form", required=True)
    p.add_argument("--cutoff", type=int, default=50)
    p.add_argument("--depth", default="auto")
    _add_output_args(p)

    p = rs.add_parser("report", help="N(P) against the predicted main term; renders a ratio figure")
    p.add_argument("--form", required=True)
    p.add_argument("--P", required=True, type=_int_list)
    p.add_argument("--cutoff", type=int, default=50)
    p.add_argument("--depth", default="auto")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--samples", type=float, default=2e6)
    p.add_argument("--seed", type=int, default=42)
    _add_output_args(p)

    return ap


def _figure_path(args, suffix: str) -> str:
    if args.out:
        return str(Path(args.out).with_suffix("")) + suffix
    return suffix.lstrip("_")


# -- subcommand bodies --------------------------------------------------

def _run_count(args) -> int:
    c = _load_single_form(args.form)
    if args.what == "aux":
        threads = args.threads if args.threads else _default_threads()
        reports = [counting.count_aux(c, B, args.strictness, threads=threads) for B in args.B]
    elif args.what == "nh":
        H = c.hessian(args.x)
        reports = [counting.count_NH(H, B, args.strictness) for B in args.B]
    else:
        reports = [counting.count_aux_eq(c, B) for B in args.B]
    rows = [("B", "count", "strictness")]
    rows += [(r.B, r.count, r.strictness) for r in reports]
    _emit(args, {"kind": f"count_{args.what}", "rows": [r.to_dict() for r in reports]}, rows)
    return 0


def _run_classify(args) -> int:
    c = _load_single_form(args.form)
    hist = counting.class_histogram(c, args.B)
    labels = sorted(hist)
    rows = [("class", "points")] + [(lab, hist[lab]) for lab in labels]
    _emit(args, {"kind": "classify", "B": args.B, "histogram": hist}, rows)
    if args.histogram:
        fig = reportio.histogram_figure(labels, [hist[lab] for lab in labels],
                                        f"dyadic classes, B={args.B}", "lattice points")
        reportio.save_figure(fig, _figure_path(args, "_classes.png"))
    return 0


def _run_trichotomy(args) -> int:
    c = _load_single_form(args.form)
    ph = counting.pigeonhole(c, args.B)
    tri = counting.trichotomy(c, args.B, args.C, args.sigma, ph.dclass)
    obj = {"kind": "trichotomy", "pigeonhole": ph.to_dict(), "result": tri.to_dict()}
    rows = [("class", "branch"), (ph.dclass.label(), tri.branch)]
    _emit(args, obj, rows)
    return 0


def _run_davenport(args) -> int:
    c = _load_single_form(args.form)
    if args.what == "verify":
        rep = davenport.verify_Hy_identity(c, args.b, args.trials, args.seed)
        obj = {"kind": "davenport_verify", "b": args.b, **rep.to_dict()}
        rows = [("b", "trials", "passed", "pass"),
                (args.b, rep.trials, rep.passed, rep.passes)]
    else:
        res = davenport.dichotomy(c, args.B, args.C, args.sigma)
        obj = {"kind": "davenport_dichotomy", "result": res.to_dict()}
        rows = [("kind", "branch"), (res.kind, res.branch)]
    _emit(args, obj, rows)
    return 0


def _run_circle(args) -> int:
    system = circlemod.DiagonalSystem.from_forms(load_forms(args.form))
    if args.what == "count":
        rows = [("P", "count")]
        counts = []
        for P in args.P:
            cnt = circlemod.count_zeros_box(system, P)
            counts.append({"P": P, "count": cnt})
            rows.append((P, cnt))
        _emit(args, {"kind": "circle_count", "rows": counts}, rows)
        return 0
    depth = None if args.depth == "auto" else int(args.depth)
    if args.what == "series":
        rep = circlemod.singular_series_estimate(system, args.cutoff, depth)
        rows = [("p", "depth", "sigma_p", "stable")]
        rows += [(p, d, f"{s:.10g}", st) for (p, d, s, st) in rep.factors]
        _emit(args, {"kind": "circle_series", **rep.to_dict()}, rows)
        return 0
    rep = circlemod.convergence_report(system, args.P, args.cutoff, depth,
                                       args.epsilon, int(args.samples), args.seed)
    _emit(args, {"kind": "circle_report", **rep.to_dict()}, list(rep.csv_rows()))
    fig = reportio.ratio_figure([r.P for r in rep.rows], [r.ratio for r in rep.rows],
                                "count / predicted main term")
    reportio.save_figure(fig, _figure_path(args, "_ratios.png"))
    return 0


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "count":
            return _run_count(args)
        if args.command == "classify":
            return _run_classify(args)
        if args.command == "trichotomy":
            return _run_trichotomy(args)
        if args.command == "davenport":
            return _run_davenport(args)
        if args.command == "circle":
            return _run_circle(args)
    except CubicFormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
