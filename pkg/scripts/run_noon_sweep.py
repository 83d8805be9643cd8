"""Noon-start sweep: FOCS against FOCS-PM over instance sizes.

Writes summary medians plus per-run records, the data behind a
"median solve time versus n" plot for both variants.

    python3 scripts/run_noon_sweep.py --out results/noon.csv
"""

from __future__ import annotations

import argparse

from focs.bench import ExperimentConfig, emit_results, merge, run_experiment


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[50, 100, 200, 400])
    parser.add_argument("--granularity", type=int, default=900)
    parser.add_argument("--method", default="sap")
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--data", default="synthetic")
    parser.add_argument("--out", default="noon.csv")
    args = parser.parse_args(argv)

    summaries = [
        run_experiment(
            ExperimentConfig(
                n=n,
                granularity=args.granularity,
                method=args.method,
                variant="both",
                start="noon",
                runs=args.runs,
                seed=args.seed,
                data=args.data,
            )
        )
        for n in args.n
    ]
    summary = merge(summaries)
    for path in emit_results(summary, args.out, per_run=True):
        print(f"wrote {path}")
    for (n, _, method, _), ratio in sorted(summary.ratio().items()):
        print(f"n={n:4d} {method}: focs-pm/focs = {ratio:.3f} (improvement {1 - ratio:.0%})")


if __name__ == "__main__":
    main()
