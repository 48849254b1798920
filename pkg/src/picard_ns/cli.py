"""``sweep`` command line: run, borders, point, verify, plot.

Exit codes: 0 success, 1 config error, 2 I/O error, 3 at least one
degenerate or failed point (or a failing oracle for ``verify``).
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace

from .oracles import run_oracle_gate
from .spectral import ForceParams
from .sweep import (
    BORDER_COLUMNS,
    F_RANGE,
    RECORD_COLUMNS,
    ConfigError,
    SweepConfig,
    SweepIOError,
    _fmt,
    _write_csv,
    border_filename,
    emit_border_curves,
    emit_reports,
    ensure_writable,
    load_config,
    point_record,
    record_row,
    run_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_DEGENERATE = 0, 1, 2, 3


def _cmd_run(args) -> int:
    cfg = load_config(args.config) if args.config else SweepConfig()
    cfg = replace(cfg, out_dir=args.out)
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    cfg.validate()
    ensure_writable(args.out)
    if not args.no_verify:
        reports = run_oracle_gate()
        for r in reports:
            print(r.summary(), file=sys.stderr)
        if not all(r.passed for r in reports):
            print("oracle gate failed; sweep not run", file=sys.stderr)
            return EXIT_DEGENERATE
    report = run_sweep(cfg)
    for path in emit_reports(report, args.out):
        print(path)
    return EXIT_DEGENERATE if report.failed else EXIT_OK


def _cmd_borders(args) -> int:
    out = ensure_writable(args.out)
    for nu, table in emit_border_curves(args.nu, F_RANGE, args.samples).items():
        path = out / border_filename(nu)
        _write_csv(path, BORDER_COLUMNS, ([_fmt(F), _fmt(mu)] for F, mu in table))
        print(path)
    return EXIT_OK


def _cmd_point(args) -> int:
    try:
        ForceParams(args.n, args.F, args.mu, args.nu)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg = SweepConfig(L=args.L, N=args.N, t_final=args.t_final, steps=args.steps).validate()
    rec = point_record(args.n, args.F, args.mu, args.nu, cfg)
    w = csv.writer(sys.stdout, lineterminator="\n")
    if args.header:
        w.writerow(RECORD_COLUMNS)
    w.writerow(record_row(rec))
    return EXIT_DEGENERATE if rec.degenerate else EXIT_OK


def _cmd_verify(args) -> int:
    reports = run_oracle_gate()
    for r in reports:
        print(r.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_DEGENERATE


def _cmd_plot(args) -> int:
    from .plotting import plot_directory

    for path in plot_directory(args.indir, args.out or args.indir):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sweep", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a parameter sweep and write CSV tables")
    p.add_argument("--config", help="key-value config file ([sweep] section)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, help="worker processes (overrides config)")
    p.add_argument("--no-verify", action="store_true", help="skip the oracle gate")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("borders", help="write border curves mu = (F/nu)^(1/4)")
    p.add_argument("--out", required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--nu", type=float, nargs="+", default=list(SweepConfig().viscosities))
    p.set_defaults(func=_cmd_borders)

    p = sub.add_parser("point", help="evaluate one parameter point, print a records.csv row")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--L", type=float, default=8.0)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--t-final", type=float, default=1.0)
    p.add_argument("--header", action="store_true", help="print the column header first")
    p.set_defaults(func=_cmd_point)

    p = sub.add_parser("verify", help="run the reference oracles")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("plot", help="render PNG charts from a sweep output directory")
    p.add_argument("--in", dest="indir", required=True)
    p.add_argument("--out", help="image directory (defaults to --in)")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SweepIOError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
