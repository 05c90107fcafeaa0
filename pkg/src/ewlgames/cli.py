"""Command line entry point: ``ewlgames run|verify|list-catalog``.

Exit status: 0 success (all claims pass), 1 claim failure or runtime error,
2 configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import kernels
from .config import ConfigError, load_config
from .ewl import CATALOG_NAMES, catalog

log = logging.getLogger("ewlgames")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.output:
        cfg.output_path = args.output
    from .runner import run

    try:
        report, dest = run(cfg)
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if dest is not None:
        log.info("wrote %s", dest)
    if cfg.analysis == "verify_claims" and not report.data["all_passed"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    from .claims import claims_report, verify_claims

    results = verify_claims()
    for r in results:
        print(r.line())
    report = claims_report(results)
    if args.json:
        Path(args.json).write_text(report.to_json())
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} claims passed (kernel backend: {kernels.BACKEND})")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_list_catalog(args) -> int:
    for name in CATALOG_NAMES:
        proc, scen = catalog(name)
        space = type(proc.strategy_space).__name__
        print(f"{name:12s} n={proc.n}  scenario={scen.name:14s} strategies={space}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ewlgames", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the analysis described by a YAML config")
    p.add_argument("config")
    p.add_argument("-o", "--output", help="override output.path ('-' for stdout)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check every quantitative claim; exit 1 on any failure")
    p.add_argument("--json", help="also write the claim report as JSON")
    p.add_argument("--csv", help="also write the claim report as CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list-catalog", help="list the built-in procedures")
    p.set_defaults(func=cmd_list_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
