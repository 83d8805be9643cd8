"""Self-checks: golden instances, oracle equivalence and structural properties.

Every random instance is drawn from ``random.Random(seed + k)``, so a failing
seed reported here reproduces the counterexample on its own.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .generators import min_cut_brute_force, random_jobs, random_network
from .instance import Job, Schedule, aggregate_profile, check_schedule, discretize
from .maxflow import MaxFlowMethod, max_flow
from .oracle import QuantizedInstance, minmax_peak_bisect, optimal_quantized, quantization_bound
from .scheduler import solve, solve_prefix

SUITES = ("golden", "oracle", "properties")
QUANTUM = 0.25

STAIRCASE_JOBS = (Job(1, 0.0, 2.0, 4.0, 2.0), Job(2, 1.0, 3.0, 2.0, 1.0))
TIED_JOBS = (
    Job(1, 0.0, 2.0, 2.0, 2.0),
    Job(2, 0.0, 1.0, 0.5, 2.0),
    Job(3, 1.0, 2.0, 0.5, 2.0),
    Job(4, 0.0, 2.0, 2.0, 2.0),
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    failing_seeds: list[int] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" seeds={self.failing_seeds[:10]}" if self.failing_seeds else ""
        return f"{status} {self.name}: {self.detail}{tail}"


@dataclass
class VerifyReport:
    suite: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class VerifyConfig:
    suite: str = "golden"
    seed: int = 0
    count: int = 500
    # corrupt one schedule entry to prove the feasibility check bites
    inject_fault: bool = False


def _close(xs, ys, tol=1e-6) -> bool:
    return len(xs) == len(ys) and all(abs(x - y) <= tol for x, y in zip(xs, ys))


def _corrupt(schedule: Schedule) -> Schedule:
    key = min(schedule.energy, key=str)
    energy = dict(schedule.energy)
    energy[key] -= 0.5
    return Schedule(energy, schedule.fixed_intervals)


def golden(inject_fault: bool = False) -> list[CheckResult]:
    checks = []
    jobs = list(STAIRCASE_JOBS)
    tl = discretize(jobs)
    for method in MaxFlowMethod:
        report = solve(jobs, tl, method)
        prefix = solve_prefix(jobs, tl, method, focus={1})
        profile = aggregate_profile(report.schedule, tl).values
        order = [sorted(r.critical_set) for r in report.rounds]
        ok = (
            _close(profile, (2.0, 3.0, 1.0))
            and order == [[2], [1], [3]]
            and _close(report.fixed_powers, (3.0, 2.0, 1.0))
            and report.total_flow_calls == 6
            and prefix.total_flow_calls == 5
            and prefix.stopped_early
        )
        checks.append(
            CheckResult(
                f"staircase-{method.value}",
                ok,
                f"profile={profile} levels={report.fixed_powers} calls={report.total_flow_calls} "
                f"prefix_calls={prefix.total_flow_calls}",
            )
        )
        schedule = _corrupt(report.schedule) if inject_fault else report.schedule
        problems = check_schedule(jobs, tl, schedule)
        checks.append(CheckResult(f"staircase-feasibility-{method.value}", not problems, "; ".join(problems) or "ok"))

    jobs = list(TIED_JOBS)
    tl = discretize(jobs)
    matrices = {}
    for method in MaxFlowMethod:
        report = solve(jobs, tl, method)
        profile = aggregate_profile(report.schedule, tl).values
        matrices[method.value] = dict(report.schedule.energy)
        ok = _close(profile, (2.5, 2.5)) and abs(report.objective - 12.5) <= 1e-6
        checks.append(CheckResult(f"tied-{method.value}", ok, f"profile={profile} objective={report.objective}"))
    distinct = len({tuple(sorted(m.items())) for m in matrices.values()})
    checks.append(CheckResult("tied-per-ev-schedules", True, f"{distinct} distinct per-EV matrices over 4 methods"))
    return checks


def oracle_suite(seed: int, count: int) -> list[CheckResult]:
    bad_obj, bad_peak = [], []
    worst = 0.0
    for k in range(count):
        s = seed + k
        jobs = random_jobs(random.Random(s), quantum=QUANTUM)
        tl = discretize(jobs)
        report = solve(jobs, tl)
        qi = QuantizedInstance.from_jobs(jobs, tl, QUANTUM)
        schedule, f_oracle = optimal_quantized(qi, tl.lengths)
        bound = quantization_bound(aggregate_profile(schedule, tl).values, tl.lengths, QUANTUM)
        gap = f_oracle - report.objective
        if not (-1e-9 <= gap <= bound):
            bad_obj.append(s)
        if bound:
            worst = max(worst, gap / bound)
        if abs(report.rounds[0].fixed_power - minmax_peak_bisect(jobs, tl)) > 1e-6:
            bad_peak.append(s)
    return [
        CheckResult(
            "oracle-equivalence",
            not bad_obj,
            f"{count - len(bad_obj)}/{count} within quantization bound, worst gap/bound {worst:.3f}",
            bad_obj,
        ),
        CheckResult("peak-vs-bisection", not bad_peak, f"{count - len(bad_peak)}/{count} within 1e-6 kW", bad_peak),
    ]


def properties_suite(seed: int, count: int) -> list[CheckResult]:
    failures: dict[str, list[int]] = {
        name: []
        for name in (
            "feasibility",
            "strictly-decreasing-levels",
            "work-bound",
            "prefix-consistency",
            "early-stop-dominance",
            "method-invariant-profile",
            "maxflow-agreement",
            "maxflow-equals-min-cut",
        )
    }
    for k in range(count):
        s = seed + k
        jobs = random_jobs(random.Random(s), quantum=QUANTUM)
        tl = discretize(jobs)
        reports = {m: solve(jobs, tl, m) for m in MaxFlowMethod}
        base = reports[MaxFlowMethod.SHORTEST_AUGMENTING_PATH]
        for report in reports.values():
            if check_schedule(jobs, tl, report.schedule):
                failures["feasibility"].append(s)
            levels = report.fixed_powers
            if any(a <= b + 1e-9 for a, b in zip(levels, levels[1:])):
                failures["strictly-decreasing-levels"].append(s)
            if report.total_flow_calls > tl.m**2:
                failures["work-bound"].append(s)
        prefix = solve_prefix(jobs, tl, focus={1})
        for i in prefix.schedule.fixed_intervals:
            for j in tl.avail_by_interval[i]:
                if abs(prefix.schedule.get(i, j) - base.schedule.get(i, j)) > 1e-6:
                    failures["prefix-consistency"].append(s)
                    break
        if prefix.total_flow_calls > base.total_flow_calls:
            failures["early-stop-dominance"].append(s)
        p0 = aggregate_profile(base.schedule, tl).values
        if any(not _close(aggregate_profile(r.schedule, tl).values, p0) for r in reports.values()):
            failures["method-invariant-profile"].append(s)

        net = random_network(random.Random(s))
        values = [max_flow(net, m).value for m in MaxFlowMethod]
        if max(values) - min(values) > 1e-9 * max(1.0, max(values)):
            failures["maxflow-agreement"].append(s)
        if abs(values[0] - min_cut_brute_force(net)) > 1e-9 * max(1.0, values[0]):
            failures["maxflow-equals-min-cut"].append(s)
    return [
        CheckResult(name, not seeds, f"{count - len(set(seeds))}/{count} instances", sorted(set(seeds)))
        for name, seeds in failures.items()
    ]


def verify(config: VerifyConfig) -> VerifyReport:
    if config.suite == "golden":
        checks = golden(config.inject_fault)
    elif config.suite == "oracle":
        checks = oracle_suite(config.seed, config.count)
    elif config.suite == "properties":
        checks = properties_suite(config.seed, config.count)
    else:
        raise ValueError(f"unknown suite {config.suite!r}; choose from {SUITES}")
    return VerifyReport(config.suite, checks)
