"""Full-day runtimes of the four max-flow methods inside FOCS.

    python3 scripts/compare_methods.py --n 50 100 --runs 25 --out results/methods.csv
"""

from __future__ import annotations

import argparse

from focs.bench import ExperimentConfig, emit_results, merge, run_experiment


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--granularity", type=int, default=900)
    parser.add_argument("--runs", type=int, default=25)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--data", default="synthetic")
    parser.add_argument("--out", default="methods.csv")
    args = parser.parse_args(argv)

    summary = merge(
        [
            run_experiment(
                ExperimentConfig(
                    n=n,
                    granularity=args.granularity,
                    method="all",
                    variant="focs",
                    start="full-day",
                    runs=args.runs,
                    seed=args.seed,
                    data=args.data,
                )
            )
            for n in args.n
        ]
    )
    for path in emit_results(summary, args.out, per_run=True):
        print(f"wrote {path}")
    for row in sorted(summary.rows, key=lambda r: (r["n"], r["median_solve_s"])):
        print(f"n={row['n']:4d} {row['method']:>6}: median solve {row['median_solve_s'] * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
