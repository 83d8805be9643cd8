"""Problem instances: charging jobs, time discretization and schedule evaluation.

Units are fixed throughout the package: time in hours, energy in kWh,
power in kW.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

# |sum_i e_ij - e_j| <= DEMAND_TOL * max(1, e_j) counts as "demand met exactly"
DEMAND_TOL = 1e-6


class InstanceError(ValueError):
    """Raised when jobs or sessions cannot form a valid instance."""


class InfeasibleInstanceError(InstanceError):
    """A job asks for more energy than it can draw while connected."""


@dataclass(frozen=True)
class Job:
    """One charging session.

    ``demand`` must fit through the power cap within the connection window,
    otherwise no schedule exists.
    """

    id: Hashable
    arrival: float
    departure: float
    demand: float
    power_cap: float

    def __post_init__(self):
        if not self.arrival < self.departure:
            raise InstanceError(
                f"job {self.id!r}: arrival {self.arrival} is not before departure {self.departure}"
            )
        if self.demand < 0:
            raise InstanceError(f"job {self.id!r}: negative demand {self.demand}")
        if not self.power_cap > 0:
            raise InstanceError(f"job {self.id!r}: non-positive power cap {self.power_cap}")

    @property
    def window(self) -> float:
        return self.departure - self.arrival

    @property
    def max_energy(self) -> float:
        return self.power_cap * self.window

    def is_feasible(self) -> bool:
        return self.demand <= self.max_energy * (1 + 1e-12)


def check_feasible(jobs: Iterable[Job]) -> None:
    """Raise `InfeasibleInstanceError` naming the first job that cannot be served."""
    for job in jobs:
        if not job.is_feasible():
            raise InfeasibleInstanceError(
                f"job {job.id!r}: demand {job.demand} kWh exceeds "
                f"{job.power_cap} kW x {job.window} h = {job.max_energy} kWh"
            )


@dataclass(frozen=True)
class AtomicInterval:
    index: int
    start: float
    end: float

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class Timeline:
    """Breakpoints, atomic intervals and the job/interval availability maps.

    Interval indices are 1-based. ``avail_by_interval[i]`` is the set of jobs
    connected during the whole of interval ``i``; ``avail_by_job[j]`` lists the
    interval indices of job ``j`` in ascending order.
    """

    breakpoints: tuple[float, ...]
    intervals: tuple[AtomicInterval, ...]
    avail_by_interval: Mapping[int, frozenset]
    avail_by_job: Mapping[Hashable, tuple[int, ...]]

    @property
    def m(self) -> int:
        return len(self.intervals)

    @property
    def indices(self) -> range:
        return range(1, len(self.intervals) + 1)

    def interval(self, i: int) -> AtomicInterval:
        return self.intervals[i - 1]

    def length(self, i: int) -> float:
        return self.intervals[i - 1].length

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(iv.length for iv in self.intervals)

    @property
    def horizon(self) -> float:
        return self.breakpoints[-1] - self.breakpoints[0]


def discretize(jobs: Sequence[Job]) -> Timeline:
    """Split the horizon at every arrival and departure time."""
    if not jobs:
        raise InstanceError("cannot discretize an empty job list")
    ids = [job.id for job in jobs]
    if len(set(ids)) != len(ids):
        raise InstanceError("job ids must be unique")

    breakpoints = tuple(sorted({job.arrival for job in jobs} | {job.departure for job in jobs}))
    intervals = tuple(
        AtomicInterval(k + 1, breakpoints[k], breakpoints[k + 1])
        for k in range(len(breakpoints) - 1)
    )
    position = {t: k for k, t in enumerate(breakpoints)}

    by_interval: dict[int, set] = {iv.index: set() for iv in intervals}
    by_job: dict[Hashable, tuple[int, ...]] = {}
    for job in jobs:
        # breakpoints include every arrival/departure, so the window is a run of intervals
        first, last = position[job.arrival] + 1, position[job.departure]
        by_job[job.id] = tuple(range(first, last + 1))
        for i in range(first, last + 1):
            by_interval[i].add(job.id)

    return Timeline(
        breakpoints=breakpoints,
        intervals=intervals,
        avail_by_interval={i: frozenset(s) for i, s in by_interval.items()},
        avail_by_job=by_job,
    )


def energy_cap(job: Job, timeline: Timeline, i: int) -> float:
    """Most energy ``job`` can take in interval ``i``."""
    return job.power_cap * timeline.length(i)


@dataclass(frozen=True)
class Schedule:
    """Energy per (interval, job) pair.

    ``fixed_intervals`` marks the intervals whose allocation is final; a
    complete schedule fixes every interval. Missing pairs carry zero energy.
    """

    energy: Mapping[tuple[int, Hashable], float]
    fixed_intervals: frozenset = field(default_factory=frozenset)

    @classmethod
    def complete(cls, energy: Mapping[tuple[int, Hashable], float], timeline: Timeline) -> "Schedule":
        return cls(dict(energy), frozenset(timeline.indices))

    def get(self, i: int, job_id: Hashable) -> float:
        return self.energy.get((i, job_id), 0.0)

    def is_complete(self, timeline: Timeline) -> bool:
        return self.fixed_intervals >= frozenset(timeline.indices)

    def delivered(self, job_id: Hashable) -> float:
        return sum(e for (_, j), e in self.energy.items() if j == job_id)

    def restricted(self, intervals: Iterable[int]) -> "Schedule":
        keep = frozenset(intervals)
        return Schedule(
            {(i, j): e for (i, j), e in self.energy.items() if i in keep},
            self.fixed_intervals & keep,
        )


@dataclass(frozen=True)
class PowerProfile:
    """Average aggregated power per interval; ``None`` marks an unfixed interval."""

    values: tuple[float | None, ...]
    lengths: tuple[float, ...]

    @property
    def is_complete(self) -> bool:
        return all(v is not None for v in self.values)

    @property
    def peak(self) -> float:
        return max((v for v in self.values if v is not None), default=0.0)


def aggregate_profile(schedule: Schedule, timeline: Timeline) -> PowerProfile:
    load = [0.0] * timeline.m
    for (i, _), e in schedule.energy.items():
        load[i - 1] += e
    values = tuple(
        load[i - 1] / timeline.length(i) if i in schedule.fixed_intervals else None
        for i in timeline.indices
    )
    return PowerProfile(values, timeline.lengths)


def objective(profile: PowerProfile) -> float:
    """Time integral of squared aggregated power, in kW^2 h."""
    if not profile.is_complete:
        raise ValueError("objective is undefined for a partial profile")
    return math.fsum(length * p * p for p, length in zip(profile.values, profile.lengths))


def check_schedule(
    jobs: Sequence[Job],
    timeline: Timeline,
    schedule: Schedule,
    *,
    demand_tol: float = DEMAND_TOL,
    cap_tol: float = 1e-9,
) -> list[str]:
    """List every violated constraint of a complete schedule; empty means feasible.

    Each message starts with the constraint name: ``demand``,
    ``nonnegativity``, ``power-cap`` or ``availability``.
    """
    by_id = {job.id: job for job in jobs}
    problems = []
    for (i, j), e in schedule.energy.items():
        if j not in by_id or i not in timeline.avail_by_job.get(j, ()):
            problems.append(f"availability: job {j!r} charges {e} kWh in interval {i} outside its window")
            continue
        if e < -cap_tol:
            problems.append(f"nonnegativity: job {j!r} has {e} kWh in interval {i}")
        cap = energy_cap(by_id[j], timeline, i)
        if e > cap + cap_tol * max(1.0, cap):
            problems.append(f"power-cap: job {j!r} has {e} kWh in interval {i}, cap {cap}")
    delivered: dict[Hashable, float] = {job.id: 0.0 for job in jobs}
    for (_, j), e in schedule.energy.items():
        if j in delivered:
            delivered[j] += e
    for job in jobs:
        if abs(delivered[job.id] - job.demand) > demand_tol * max(1.0, job.demand):
            problems.append(f"demand: job {job.id!r} receives {delivered[job.id]} kWh of {job.demand}")
    return problems


GRANULARITIES = (60, 900, 1800, 3600)
CLAMP_POLICIES = ("reject", "clamp-energy")


@dataclass
class DropCounts:
    zero_demand: int = 0
    empty_window: int = 0
    clamped: int = 0


def prepare_jobs(sessions, granularity: int = 60, clamp_policy: str = "reject") -> tuple[list[Job], DropCounts]:
    """Turn raw sessions into jobs on a time grid of ``granularity`` seconds.

    Arrivals round up and departures round down, so a job is never offered
    time it was not connected. Sessions left with zero demand or an empty
    window are dropped and counted.
    """
    from .ingest import assign_pmax

    if granularity not in GRANULARITIES:
        raise InstanceError(f"granularity must be one of {GRANULARITIES}, got {granularity}")
    if clamp_policy not in CLAMP_POLICIES:
        raise InstanceError(f"unknown clamp policy {clamp_policy!r}")
    counts = DropCounts()
    jobs = []
    for s in sessions:
        if s.energy_kwh <= 0:
            counts.zero_demand += 1
            continue
        start = math.ceil(s.arrival_ts / granularity) * granularity
        stop = math.floor(s.departure_ts / granularity) * granularity
        if stop <= start:
            counts.empty_window += 1
            continue
        cap = s.power_cap_kw if s.power_cap_kw is not None else assign_pmax(s)
        if not cap > 0:
            raise InstanceError(f"session {s.session_id}: non-positive power cap {cap}")
        arrival, departure = start / 3600.0, stop / 3600.0
        demand = s.energy_kwh
        limit = cap * (departure - arrival)
        if demand > limit:
            if clamp_policy == "reject":
                raise InfeasibleInstanceError(
                    f"session {s.session_id}: {demand} kWh does not fit {cap} kW x {departure - arrival} h"
                )
            demand = limit
            counts.clamped += 1
        jobs.append(Job(s.session_id, arrival, departure, demand, cap))
    return jobs, counts


def build_jobs(sessions, granularity: int = 60, clamp_policy: str = "reject") -> list[Job]:
    jobs, counts = prepare_jobs(sessions, granularity, clamp_policy)
    if counts.zero_demand or counts.empty_window:
        log.info(
            "dropped %d zero-demand and %d empty-window sessions",
            counts.zero_demand,
            counts.empty_window,
        )
    return jobs
