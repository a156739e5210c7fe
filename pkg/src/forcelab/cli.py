"""Command line entry points.

forcelab run --scenario FILE [--suite NAME]... [--seed N] [--pool-rank R]
             [--max-size S] [--format text|jsonl] [--timings]
forcelab check FILE

Exit codes: 0 all pass, 1 failures, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import dsl, runner
from .errors import DslError, ForcelabError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forcelab",
                                     description="finite-scale forcing workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario's queries and suites")
    run_p.add_argument("--scenario", required=True, help="scenario file")
    run_p.add_argument("--suite", action="append", default=[],
                       choices=sorted(dsl.SUITE_KINDS),
                       help="restrict to suite kinds (repeatable)")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--pool-rank", type=int, default=2,
                       help="rank cap for generated name pools")
    run_p.add_argument("--max-size", type=int, default=None,
                       help="carrier cap override (also FORCELAB_MAX_CARRIER)")
    run_p.add_argument("--format", choices=("text", "jsonl"), default="text")
    run_p.add_argument("--timings", action="store_true",
                       help="include per-item timings (non-deterministic)")

    check_p = sub.add_parser("check", help="parse and validate a scenario")
    check_p.add_argument("file")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    if args.command == "check":
        try:
            with open(args.file, encoding="utf-8") as fh:
                dsl.parse(fh.read())
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except (DslError, ForcelabError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"OK {args.file}")
        return 0

    if args.max_size is not None:
        os.environ["FORCELAB_MAX_CARRIER"] = str(args.max_size)
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            scenario = dsl.parse(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DslError, ForcelabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = runner.run(scenario, seed=args.seed, suites=args.suite or None,
                        pool_rank=args.pool_rank)
    if args.format == "jsonl":
        sys.stdout.write(report.jsonl(timings=args.timings))
    else:
        sys.stdout.write(report.text(timings=args.timings))
    return 1 if report.failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
