"""Command-line interface: ``mpstop {mp,limits,simulate,analyze,figure}``.

Exit status is 0 on success, 2 on bad usage and 1 when a computation or a
dataset fails. ``MPSTOP_SEED`` sets the default seed.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import data_io, figures
from .enp import CPV_COLUMNS, GK_COLUMNS, SweepSpec, run_cpv_sweep, run_gk_sweep
from .mp import (
    MPLaw,
    cpv_limit,
    gk_limit,
    mp_cdf,
    mp_pdf,
    mp_quantile,
    mp_tail_mass_G,
)


def _number(text, lo=None, hi=None, lo_open=False, hi_open=False):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    if lo is not None and (v < lo or (lo_open and v == lo)):
        raise argparse.ArgumentTypeError(f"{v} is out of range")
    if hi is not None and (v > hi or (hi_open and v == hi)):
        raise argparse.ArgumentTypeError(f"{v} is out of range")
    return v


def positive(text):
    return _number(text, lo=0.0, lo_open=True)


def unit_open(text):
    return _number(text, lo=0.0, hi=1.0, lo_open=True, hi_open=True)


def unit_closed(text):
    return _number(text, lo=0.0, hi=1.0)


def rho_value(text):
    return _number(text, lo=0.0, hi=1.0, hi_open=True)


def positive_int(text, minimum=1):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < minimum:
        raise argparse.ArgumentTypeError(f"must be at least {minimum}")
    return v


def listing(item):
    def parse(text):
        parts = [s for s in text.split(",") if s.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("empty list")
        return [item(s) for s in parts]

    return parse


def grid(text):
    """``lo:hi:steps`` for an evenly spaced grid, or a comma-separated list."""
    if ":" not in text:
        return listing(float)(text)
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:steps, got {text!r}") from None
    if steps < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    return list(np.linspace(lo, hi, steps))


def c_grid(text):
    values = grid(text)
    if min(values) <= 0:
        raise argparse.ArgumentTypeError(f"every c must be positive, got {text!r}")
    return values


def default_seed():
    return int(os.environ.get("MPSTOP_SEED", "0"))


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _g(v):
    return f"{v:.10g}"


def cmd_mp(args):
    law = MPLaw(args.c, args.sigma2)
    w = csv.writer(sys.stdout, lineterminator="\n")
    if args.quantile is not None:
        w.writerow(["u", "quantile"])
        w.writerow([_g(args.quantile), _g(mp_quantile(law, args.quantile))])
        return 0
    xs = [args.eval] if args.eval is not None else args.grid
    w.writerow(["x", "pdf", "cdf", "G"])
    for x in xs:
        w.writerow([_g(x), _g(mp_pdf(law, x)), _g(mp_cdf(law, x)), _g(mp_tail_mass_G(law, x))])
    return 0


def cmd_limits(args):
    cols = ["c", "rho", "gk_limit"] + (["t", "cpv_limit"] if args.t is not None else [])
    fh, close = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for c in args.c_grid:
            for rho in args.rho_list:
                row = [_g(c), _g(rho), _g(gk_limit(c, rho))]
                if args.t is not None:
                    row += [_g(args.t), _g(cpv_limit(c, rho, args.t))]
                w.writerow(row)
    finally:
        if close:
            fh.close()
    return 0


def cmd_simulate(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = dict(n=args.n, p_values=args.p_list, rho_values=args.rho_list, reps=args.reps,
                seed=args.seed, workers=args.workers)
    gk_rows = run_gk_sweep(SweepSpec(**base, matrix=args.gk_matrix))
    data_io.write_table(gk_rows, GK_COLUMNS, out / "gk_sweep.csv")
    failed = [r["error"] for r in gk_rows if r["error"]]
    if args.t is not None:
        cpv_rows = run_cpv_sweep(SweepSpec(**base, t=args.t, matrix=args.cpv_matrix))
        data_io.write_table(cpv_rows, CPV_COLUMNS, out / "cpv_sweep.csv")
        failed += [r["error"] for r in cpv_rows if r["error"]]
    for msg in failed:
        print(f"error: {msg}", file=sys.stderr)
    return 1 if failed else 0


def cmd_analyze(args):
    reports = []
    for path in args.input:
        ds = data_io.read_csv(path, delimiter=args.delimiter, header=not args.no_header)
        reports.append(data_io.analyze(ds, args.t))
    data_io.write_report(reports, args.format, args.out or sys.stdout)
    return 0


def cmd_figure(args):
    kw = dict(seed=args.seed, reps=args.reps, workers=args.workers)
    if args.n is not None:
        kw["n"] = args.n
    if args.p_list is not None:
        kw["p_values"] = args.p_list
    manifest = figures.figure_bundle(args.which, args.out, **kw)
    for msg in manifest.get("errors", []):
        print(f"error: {msg}", file=sys.stderr)
    return 1 if manifest.get("errors") else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mpstop",
        description="Marchenko-Pastur limits of the Guttman-Kaiser and CPV stopping rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mp", help="evaluate a Marchenko-Pastur law")
    p.add_argument("--c", type=positive, required=True)
    p.add_argument("--sigma2", type=positive, default=1.0)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--eval", type=float, metavar="X")
    g.add_argument("--quantile", type=unit_closed, metavar="U")
    g.add_argument("--grid", type=grid, metavar="LO:HI:STEPS")
    p.set_defaults(func=cmd_mp)

    p = sub.add_parser("limits", help="tabulate GK (and CPV) limits over c and rho")
    p.add_argument("--rho-list", type=listing(rho_value), default=[0.0, 0.3, 0.5, 0.8])
    p.add_argument("--c-grid", type=c_grid, default=c_grid("0.1:20:200"))
    p.add_argument("--t", type=unit_open)
    p.add_argument("--out")
    p.set_defaults(func=cmd_limits)

    seed_help = "random seed (default: $MPSTOP_SEED or 0)"
    p = sub.add_parser("simulate", help="Monte Carlo sweep over p and rho at fixed n")
    p.add_argument("--n", type=lambda s: positive_int(s, 2), required=True)
    p.add_argument("--p-list", type=listing(positive_int), required=True)
    p.add_argument("--rho-list", type=listing(rho_value), default=[0.0])
    p.add_argument("--t", type=unit_open, help="also run the CPV sweep at this threshold")
    p.add_argument("--reps", type=positive_int, default=5)
    p.add_argument("--seed", type=int, default=None, help=seed_help)
    p.add_argument("--gk-matrix", choices=["R", "R_tilde", "S", "S_tilde"], default="R")
    p.add_argument("--cpv-matrix", choices=["R", "R_tilde", "S", "S_tilde"], default="S_tilde")
    p.add_argument("--workers", type=positive_int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="retention report for CSV datasets")
    p.add_argument("--input", action="append", required=True, help="CSV file (repeatable)")
    p.add_argument("--t", type=unit_open, default=0.7)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("figure", help="emit the data bundle behind a figure")
    p.add_argument("--which", type=int, choices=[2, 3, 4, 5], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=lambda s: positive_int(s, 2))
    p.add_argument("--p-list", type=listing(positive_int))
    p.add_argument("--reps", type=positive_int, default=2)
    p.add_argument("--seed", type=int, default=None, help=seed_help)
    p.add_argument("--workers", type=positive_int, default=1)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        try:
            args.seed = default_seed()
        except ValueError:
            parser.error("MPSTOP_SEED must be an integer")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"mpstop {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
