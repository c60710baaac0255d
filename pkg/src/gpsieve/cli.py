"""Command-line entry point.

    gpsieve run CONFIG [--out DIR] [--workers N] [--policies FILTER] [--seeds LIST]
    gpsieve --verify [--seed N]

``run`` exits 0 on full success, 2 when some (policy, seed) cells failed, and
1 on configuration errors. ``--verify`` executes the brute-force oracle suite
against the incremental engine and prints the resulting report.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from gpsieve.errors import ConfigError, GpSieveError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpsieve",
        description="Entropy-gated Gaussian-process bandit experiments",
    )
    parser.add_argument(
        "--verify",
        action="store_true",
        help="run the oracle verification suite and print the report",
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for the verification suite"
    )
    sub = parser.add_subparsers(dest="command")
    run_p = sub.add_parser("run", help="execute an experiment config")
    run_p.add_argument("config", help="path to a key=value experiment config")
    run_p.add_argument("--out", default=None, help="output directory override")
    run_p.add_argument("--workers", type=int, default=1, help="parallel run workers")
    run_p.add_argument(
        "--policies", default=None, help="comma-separated policy-label filter"
    )
    run_p.add_argument("--seeds", default=None, help="comma-separated seed override")
    return parser


def _cmd_run(args) -> int:
    from gpsieve.harness import filter_spec, parse_config, run_experiment

    spec = parse_config(args.config)
    spec = filter_spec(spec, policies=args.policies, seeds=args.seeds)
    if args.out is not None:
        spec = replace(spec, output_dir=args.out)
    report = run_experiment(spec, workers=args.workers)
    print(f"wrote {spec.output_dir}/summary.txt")
    if report.failures:
        for label, seed, msg in report.failures:
            print(f"FAILED {label} seed={seed}: {msg}", file=sys.stderr)
        return 2
    return 0


def _cmd_verify(seed: int) -> int:
    from gpsieve.oracle import run_oracle_suite

    report = run_oracle_suite(seed=seed)
    print(report.render())
    return 0 if report.passed() else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verify:
            return _cmd_verify(args.seed)
        if args.command == "run":
            return _cmd_run(args)
    except (ConfigError, GpSieveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser.print_help()
    return 1


if __name__ == "__main__":
    sys.exit(main())
