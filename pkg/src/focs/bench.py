"""Runtime experiments: sampled instances, build/solve CPU time, medians over runs."""

from __future__ import annotations

import csv
import json
import logging
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .ingest import clamp_to_noon, parse_sessions, rebase_to_day, sample_instance, synth_office
from .instance import build_jobs, discretize
from .maxflow import MaxFlowMethod
from .scheduler import SolverError, solve, solve_prefix

log = logging.getLogger(__name__)

VARIANTS = ("focs", "focs-pm")
STARTS = ("full-day", "noon")
NOON = 12.0

SUMMARY_COLUMNS = (
    "n",
    "granularity_s",
    "method",
    "variant",
    "start",
    "median_build_s",
    "median_solve_s",
    "median_total_s",
    "median_objective",
    "runs",
)


class ExperimentError(RuntimeError):
    """A run failed; ``seed`` reproduces it."""

    def __init__(self, message: str, seed: int):
        super().__init__(f"{message} (seed {seed})")
        self.seed = seed


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    granularity: int = 900
    method: str = "sap"
    variant: str = "focs"
    start: str = "full-day"
    runs: int = 500
    seed: int = 0
    data: str = "synthetic"
    serial: bool = False

    def __post_init__(self):
        if self.n < 1 or self.runs < 1:
            raise ValueError("n and runs must be at least 1")
        if self.granularity not in (60, 900, 1800, 3600):
            raise ValueError(f"unsupported granularity {self.granularity}")
        if self.method != "all":
            MaxFlowMethod(self.method)
        if self.variant not in VARIANTS + ("both",):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.start not in STARTS:
            raise ValueError(f"unknown start {self.start!r}")

    @property
    def methods(self) -> list[MaxFlowMethod]:
        return list(MaxFlowMethod) if self.method == "all" else [MaxFlowMethod(self.method)]

    @property
    def variants(self) -> tuple[str, ...]:
        return VARIANTS if self.variant == "both" else (self.variant,)


@dataclass(frozen=True)
class RunRecord:
    n: int
    granularity_s: int
    method: str
    variant: str
    start: str
    run: int
    seed: int
    build_time_s: float
    solve_time_s: float
    total_time_s: float
    objective: float | None
    flow_calls: int
    rounds: int


@dataclass
class Summary:
    rows: list[dict]
    records: list[RunRecord]

    def ratio(self, numerator: str = "focs-pm", denominator: str = "focs", column: str = "median_solve_s"):
        """``column`` of one variant over the other, keyed by (n, granularity_s, method, start)."""
        by_key = {}
        for row in self.rows:
            by_key[(row["n"], row["granularity_s"], row["method"], row["start"], row["variant"])] = row[column]
        out = {}
        for (n, g, m, s, v), value in by_key.items():
            if v == numerator and (n, g, m, s, denominator) in by_key:
                base = by_key[(n, g, m, s, denominator)]
                out[(n, g, m, s)] = value / base if base else float("nan")
        return out


def _load_pool(data: str):
    if data == "synthetic":
        return None
    path = Path(data)
    if not path.is_file():
        raise FileNotFoundError(f"session data {data} not found")
    return parse_sessions(path)


def _sessions_for_run(config: ExperimentConfig, pool, seed: int):
    if pool is None:
        raw = synth_office(config.n, seed)
    else:
        raw = sample_instance(pool, config.n, seed)
    return rebase_to_day(raw)


def _build(config: ExperimentConfig, sessions):
    jobs = build_jobs(sessions, config.granularity, "clamp-energy")
    if config.start == "noon":
        jobs = clamp_to_noon(jobs, NOON)
    timeline = discretize(jobs) if jobs else None
    return jobs, timeline


def run_single(config: ExperimentConfig, run: int, pool=None) -> list[RunRecord]:
    """All method/variant combinations on one sampled instance."""
    seed = config.seed + run
    sessions = _sessions_for_run(config, pool, seed)
    records = []
    for method in config.methods:
        for variant in config.variants:
            t0 = time.process_time()
            jobs, timeline = _build(config, sessions)
            t1 = time.process_time()
            try:
                if timeline is None:
                    report = None
                elif variant == "focs":
                    report = solve(jobs, timeline, method)
                else:
                    report = solve_prefix(jobs, timeline, method, focus={1})
            except (SolverError, ValueError) as exc:
                raise ExperimentError(f"run {run} ({method.value}, {variant}) failed: {exc}", seed) from exc
            t2 = time.process_time()
            records.append(
                RunRecord(
                    n=config.n,
                    granularity_s=config.granularity,
                    method=method.value,
                    variant=variant,
                    start=config.start,
                    run=run,
                    seed=seed,
                    build_time_s=t1 - t0,
                    solve_time_s=t2 - t1,
                    total_time_s=(t1 - t0) + (t2 - t1),
                    objective=(report.objective if report else 0.0),
                    flow_calls=report.total_flow_calls if report else 0,
                    rounds=len(report.rounds) if report else 0,
                )
            )
    return records


def _run_chunk(args):
    config, runs, pool = args
    return [rec for run in runs for rec in run_single(config, run, pool)]


def summarize(records: list[RunRecord]) -> list[dict]:
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        groups.setdefault((rec.n, rec.granularity_s, rec.method, rec.variant, rec.start), []).append(rec)
    rows = []
    for (n, g, m, v, s), recs in groups.items():
        objectives = [r.objective for r in recs if r.objective is not None]
        rows.append(
            {
                "n": n,
                "granularity_s": g,
                "method": m,
                "variant": v,
                "start": s,
                "median_build_s": statistics.median(r.build_time_s for r in recs),
                "median_solve_s": statistics.median(r.solve_time_s for r in recs),
                "median_total_s": statistics.median(r.total_time_s for r in recs),
                "median_objective": statistics.median(objectives) if objectives else None,
                "runs": len(recs),
            }
        )
    return rows


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> Summary:
    """Run ``config.runs`` sampled instances (seeds ``seed .. seed + runs - 1``)."""
    pool = _load_pool(config.data)
    workers = 1 if config.serial else (workers or os.cpu_count() or 1)
    runs = list(range(config.runs))
    if workers <= 1:
        records = _run_chunk((config, runs, pool))
    else:
        chunks = [runs[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            records = [rec for part in ex.map(_run_chunk, [(config, c, pool) for c in chunks]) for rec in part]
        records.sort(key=lambda r: (r.run, r.method, r.variant))
    return Summary(summarize(records), records)


def merge(summaries: list[Summary]) -> Summary:
    return Summary(
        [row for s in summaries for row in s.rows],
        [rec for s in summaries for rec in s.records],
    )


def _write(rows: list[dict], columns, path: Path, fmt: str):
    if fmt == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(columns))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: ("" if row[k] is None else row[k]) for k in columns})
    elif fmt == "json":
        with path.open("w", encoding="utf-8") as fh:
            json.dump([{k: row[k] for k in columns} for row in rows], fh, indent=2)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def emit_results(summary: Summary, path: str | Path, fmt: str = "csv", per_run: bool = False) -> list[Path]:
    """Write summary rows (and per-run records next to them when ``per_run``)."""
    if not summary.rows:
        raise ValueError("nothing to emit: summary is empty")
    path = Path(path)
    _write(summary.rows, SUMMARY_COLUMNS, path, fmt)
    written = [path]
    if per_run:
        run_path = path.with_name(f"{path.stem}.runs{path.suffix or '.' + fmt}")
        columns = [f.name for f in fields(RunRecord)]
        _write([asdict(r) for r in summary.records], columns, run_path, fmt)
        written.append(run_path)
    return written
