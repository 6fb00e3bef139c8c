"""Command-line front end: `compute` (config-driven sweeps), `figure`
(named benchmark presets), and `verify` (the acceptance suite).

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 numerical failure aborting a whole run.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .acceptance import report_csv, run_all
from .errors import QuthermoError, UsageError
from .sweep import (
    FIGURE_PRESETS,
    figure_nsub,
    figure_records,
    load_config,
    run_sweep,
    write_csv,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quthermo",
        description="Temperature-estimation precision limits and correlation "
                    "measures for thermal spin models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="run a sweep described by a TOML config")
    c.add_argument("--config", required=True, help="path to the experiment config")
    c.add_argument("--out", help="output CSV path (overrides the config)")
    c.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    c.add_argument("--reproducible", action="store_true",
                   help="suppress the timestamp header for byte-identical output")

    f = sub.add_parser("figure", help="emit a named benchmark preset as CSV")
    f.add_argument("name", help=f"one of {', '.join(sorted(FIGURE_PRESETS))}")
    f.add_argument("--out-dir", default=".", help="directory for the CSV file")

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--report", help="also write a machine-readable CSV report here")
    return parser


def _cmd_compute(args) -> int:
    config = load_config(args.config)
    records = run_sweep(config, workers=max(1, args.jobs))
    out = args.out or config.output
    write_csv(out, records, config.model.nsub(), reproducible=args.reproducible)
    failed = sum(r.status != "ok" for r in records)
    print(f"wrote {len(records)} records to {out}" + (f" ({failed} failed)" if failed else ""))
    if records and all(r.status != "ok" for r in records):
        print("every grid point failed", file=sys.stderr)
        return 3
    return 0


def _cmd_figure(args) -> int:
    records = figure_records(args.name)
    os.makedirs(args.out_dir, exist_ok=True)
    out = os.path.join(args.out_dir, f"{args.name}.csv")
    write_csv(out, records, figure_nsub(args.name), reproducible=True)
    print(f"wrote {len(records)} records to {out}")
    return 0


def _cmd_verify(args) -> int:
    results = run_all(progress=print)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report_csv(results))
    failed = [r for r in results if not r.passed]
    total = sum(r.seconds for r in results)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed in {total:.1f}s")
    return 1 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            return _cmd_compute(args)
        if args.command == "figure":
            return _cmd_figure(args)
        return _cmd_verify(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuthermoError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
