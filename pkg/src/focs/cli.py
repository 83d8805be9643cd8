"""Command line: ``focs bench ...`` and ``focs verify ...``.

Exit codes: 0 success, 1 solver error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .bench import ExperimentConfig, ExperimentError, emit_results, merge, run_experiment
from .verify import SUITES, VerifyConfig, verify

EXIT_OK, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2


def _bench_parser(sub):
    p = sub.add_parser("bench", help="run a runtime experiment and write medians")
    p.add_argument("--n", type=int, nargs="+", required=True, help="instance size(s)")
    p.add_argument("--granularity", type=int, choices=(60, 900, 1800, 3600), default=900)
    p.add_argument("--method", choices=("sap", "ek", "pp", "dinitz", "all"), default="sap")
    p.add_argument("--variant", choices=("focs", "focs-pm", "both"), default="focs")
    p.add_argument("--start", choices=("full-day", "noon"), default="full-day")
    p.add_argument("--runs", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--data", default="synthetic", help="session CSV or 'synthetic'")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--per-run", action="store_true", help="also write every run record")
    p.add_argument("--serial", action="store_true", help="run in one process")


def _verify_parser(sub):
    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("--suite", choices=SUITES, default="golden")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500, help="random instances for oracle/properties")


def _bench(args) -> int:
    summaries = []
    for n in args.n:
        config = ExperimentConfig(
            n=n,
            granularity=args.granularity,
            method=args.method,
            variant=args.variant,
            start=args.start,
            runs=args.runs,
            seed=args.seed,
            data=args.data,
            serial=args.serial,
        )
        try:
            summaries.append(run_experiment(config))
        except ExperimentError as exc:
            print(f"solver error: {exc}", file=sys.stderr)
            return EXIT_SOLVER
    summary = merge(summaries)
    for path in emit_results(summary, args.out, args.format, per_run=args.per_run):
        print(f"wrote {path}")
    for (n, g, m, s), r in sorted(summary.ratio().items()):
        print(f"n={n} granularity={g}s method={m} start={s}: median solve focs-pm/focs = {r:.3f}")
    return EXIT_OK


def _verify(args) -> int:
    report = verify(VerifyConfig(args.suite, args.seed, args.count))
    for check in report.checks:
        print(check.line())
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="focs", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _bench_parser(sub)
    _verify_parser(sub)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if args.command == "bench":
            return _bench(args)
        return _verify(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
