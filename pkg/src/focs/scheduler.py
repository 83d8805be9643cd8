"""Flow-based offline charging scheduler and its early-stopping variant.

Each round raises a fill level on the remaining intervals until a maximum
flow meets all remaining demand. The intervals whose load can no longer be
moved anywhere else at that level are critical: their allocation is fixed,
they leave the instance, and the next round starts on what is left. Critical
levels come out strictly decreasing, so the rounds peel the optimal profile
off from the top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from . import maxflow
from .instance import (
    Job,
    Schedule,
    Timeline,
    aggregate_profile,
    check_feasible,
    objective,
)
from .maxflow import MaxFlowMethod

# relative tolerance on the total remaining demand for "flow meets demand"
FEASIBLE_TOL = 1e-9
# looser saturation used once a round overruns its iteration budget
STALL_SAT_TOL = 1e-7


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class RoundLog:
    round: int
    iterations: int
    final_levels: dict[int, float]
    critical_set: frozenset
    fixed_power: float
    flow_calls: int


@dataclass
class SolveReport:
    schedule: Schedule
    rounds: list[RoundLog] = field(default_factory=list)
    objective: float | None = None
    total_flow_calls: int = 0
    stopped_early: bool = False

    @property
    def fixed_powers(self) -> list[float]:
        return [r.fixed_power for r in self.rounds]


class _State:
    """Remaining instance between rounds."""

    def __init__(self, jobs: Sequence[Job], timeline: Timeline):
        self.timeline = timeline
        self.power_caps = {job.id: job.power_cap for job in jobs}
        self.original = {job.id: job.demand for job in jobs}
        self.remaining = {job.id: job.demand for job in jobs}
        self.intervals = set(timeline.indices)
        self.energy: dict[tuple[int, Hashable], float] = {}
        self.fixed: set[int] = set()
        self.prune()

    def prune(self):
        for j in [j for j, e in self.remaining.items() if e <= FEASIBLE_TOL * max(1.0, self.original[j])]:
            del self.remaining[j]
        for j in self.remaining:
            if not any(i in self.intervals for i in self.timeline.avail_by_job[j]):
                raise SolverError(f"job {j!r} still needs {self.remaining[j]} kWh but has no interval left")

    def total_demand(self) -> float:
        return math.fsum(self.remaining.values())

    def total_length(self, intervals: Iterable[int]) -> float:
        return math.fsum(self.timeline.length(i) for i in intervals)


def _run_round(state: _State, method: MaxFlowMethod, round_no: int) -> RoundLog:
    timeline = state.timeline
    demand = state.total_demand()
    if demand <= FEASIBLE_TOL:
        # nothing left to charge: every remaining interval sits at zero
        crit = frozenset(state.intervals)
        state.intervals.clear()
        state.fixed |= crit
        return RoundLog(round_no, 0, {i: 0.0 for i in crit}, crit, 0.0, 0)

    level = demand / state.total_length(state.intervals)
    budget = 4 * len(state.intervals)
    iteration = 0
    while True:
        iteration += 1
        caps = {i: level * timeline.length(i) for i in state.intervals}
        net = maxflow.build_network(timeline, state.remaining, caps, state.power_caps)
        flow = maxflow.max_flow(net, method)
        deficit = demand - flow.value
        stalled = iteration > budget
        if deficit <= FEASIBLE_TOL * max(1.0, demand):
            break
        stuck = maxflow.bottleneck_intervals(net, flow)
        if not stuck:
            raise SolverError(f"round {round_no}: demand-side bottleneck, instance is infeasible")
        if stalled:
            sat = {i for i, e in net.sink_edges.items() if flow.residual(e) <= STALL_SAT_TOL * max(1.0, caps[i])}
            if deficit <= 1e-9 * demand and sat:
                break
            raise SolverError(
                f"round {round_no}: no feasible level after {iteration} iterations "
                f"(level {level}, deficit {deficit})"
            )
        # lift the level to the average the bottleneck set needs
        level += deficit / state.total_length(stuck)

    crit = frozenset(maxflow.immovable_intervals(net, flow))
    if not crit:
        raise SolverError(f"round {round_no}: feasible level {level} but no critical interval")
    for (i, j), e in net.assign_edges.items():
        if i in crit:
            x = flow.flow[e]
            if x > 0:
                state.energy[(i, j)] = x
                state.remaining[j] -= x
    state.intervals -= crit
    state.fixed |= crit
    state.prune()
    return RoundLog(
        round=round_no,
        iterations=iteration,
        final_levels={i: level for i in caps},
        critical_set=crit,
        fixed_power=level,
        flow_calls=iteration,
    )


def _solve(jobs, timeline, method, focus=None) -> SolveReport:
    check_feasible(jobs)
    method = MaxFlowMethod(method)
    state = _State(jobs, timeline)
    rounds = []
    pending = set(focus) if focus is not None else None
    while state.intervals and (pending is None or pending - state.fixed):
        rounds.append(_run_round(state, method, len(rounds) + 1))

    schedule = Schedule(dict(state.energy), frozenset(state.fixed))
    complete = not state.intervals
    if complete and state.remaining:
        raise SolverError(f"unserved demand left for jobs {sorted(map(str, state.remaining))}")
    report = SolveReport(
        schedule=schedule,
        rounds=rounds,
        total_flow_calls=sum(r.flow_calls for r in rounds),
        stopped_early=not complete,
    )
    if complete:
        report.objective = objective(aggregate_profile(schedule, timeline))
    return report


def solve(jobs: Sequence[Job], timeline: Timeline, method=MaxFlowMethod.SHORTEST_AUGMENTING_PATH) -> SolveReport:
    """Optimal schedule for the whole horizon."""
    return _solve(jobs, timeline, method)


def solve_prefix(
    jobs: Sequence[Job],
    timeline: Timeline,
    method=MaxFlowMethod.SHORTEST_AUGMENTING_PATH,
    focus: Iterable[int] = (1,),
) -> SolveReport:
    """Stop as soon as every interval in ``focus`` is fixed.

    The fixed part agrees with an optimal complete schedule, so a model
    predictive controller can apply it directly.
    """
    focus = set(focus)
    if not focus:
        raise ValueError("focus must name at least one interval")
    unknown = focus - set(timeline.indices)
    if unknown:
        raise ValueError(f"focus intervals {sorted(unknown)} are not on the timeline")
    return _solve(jobs, timeline, method, focus)


def peak(jobs: Sequence[Job], timeline: Timeline, method=MaxFlowMethod.SHORTEST_AUGMENTING_PATH) -> float:
    """Smallest achievable maximum of the aggregated power profile."""
    check_feasible(jobs)
    state = _State(jobs, timeline)
    return _run_round(state, MaxFlowMethod(method), 1).fixed_power
