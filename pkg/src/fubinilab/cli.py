"""Command line entry point: ``fubinilab run | explain | enumerate``."""
from __future__ import annotations

import argparse
import json
import sys

from . import convspace as cs
from .errors import ConfigError, FubiniLabError
from .harness import SUITES, SuiteConfig, explain_instance, run_suite
from .harness.report import dumps


def _config(args, **extra) -> SuiteConfig:
    kw = dict(field=args.field, axioms=args.axioms, carrier_bound=args.carrier_bound)
    if args.seed is not None:
        kw["seed"] = args.seed
    kw.update(extra)
    return SuiteConfig(**kw)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", type=int, default=2, help="prime characteristic (default 2)")
    p.add_argument("--axioms", choices=cs.AXIOMS, default="limit")
    p.add_argument("--carrier-bound", type=int, default=64, help="largest structured carrier built")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (else $FUBINILAB_SEED or the default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fubinilab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the check suites and write a report")
    _common(run)
    run.add_argument("--max-size", type=int, default=2)
    run.add_argument("--suite", action="append", default=None,
                     help=f"suite to run, repeatable: all, {', '.join(SUITES)}")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--budget", type=int, default=8, help="completion iteration budget")
    run.add_argument("--oracle-instances", type=int, default=100)
    run.add_argument("--out", default=None, help="JSON-lines report path")
    run.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")

    exp = sub.add_parser("explain", help="trace the commutativity check for one pair")
    _common(exp)
    exp.add_argument("--x", required=True, help="space JSON file")
    exp.add_argument("--y", required=True, help="space JSON file")

    enum = sub.add_parser("enumerate", help="list every convergence space up to a size")
    enum.add_argument("--max-size", type=int, default=2)
    enum.add_argument("--axioms", choices=cs.AXIOMS, default="limit")
    return parser


def _read_space(path: str) -> cs.ConvSpace:
    with open(path, encoding="utf-8") as fh:
        return cs.from_json(json.load(fh))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = _config(
                args, max_size=args.max_size, suites=tuple(args.suite or ("all",)), jobs=args.jobs,
                budget=args.budget, oracle_instances=args.oracle_instances, out=args.out,
            )
            report = run_suite(cfg)
            if args.out:
                report.dump(args.out, include_timing=args.timing)
            print(report.text())
            return report.exit_code
        if args.command == "explain":
            cfg = _config(args, max_size=0)
            print(explain_instance(_read_space(args.x), _read_space(args.y), cfg))
            return 0
        for x in cs.enumerate_spaces(args.max_size, args.axioms):
            print(dumps(cs.to_json(x)))
        return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FubiniLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
