"""Reference optimizers used to check the scheduler independently.

`optimal_quantized` solves the problem exactly over allocations in whole
energy quanta with successive shortest augmenting paths on a convex-cost
network. `minmax_peak_bisect` finds the optimal peak by bisecting a uniform
power level. `brute_force_quantized` enumerates tiny instances outright.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from . import maxflow
from .instance import Job, Schedule, Timeline, energy_cap
from .maxflow import MaxFlowMethod


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class QuantizedInstance:
    quantum: float
    unit_demands: Mapping[Hashable, int]
    unit_caps: Mapping[tuple[Hashable, int], int]

    @classmethod
    def from_jobs(cls, jobs: Sequence[Job], timeline: Timeline, quantum: float) -> "QuantizedInstance":
        demands = {}
        for job in jobs:
            units = round(job.demand / quantum)
            if abs(units * quantum - job.demand) > 1e-9 * max(1.0, job.demand):
                raise OracleError(f"job {job.id!r}: demand {job.demand} is not a multiple of {quantum}")
            demands[job.id] = units
        caps = {
            (job.id, i): math.floor(energy_cap(job, timeline, i) / quantum + 1e-9)
            for job in jobs
            for i in timeline.avail_by_job[job.id]
        }
        return cls(quantum, demands, caps)

    def intervals_of(self, job_id) -> list[int]:
        return sorted(i for (j, i) in self.unit_caps if j == job_id)


def quantized_objective(units: Mapping[int, int], quantum: float, lengths: Sequence[float]) -> float:
    """Objective of per-interval loads given in quanta, evaluated exactly."""
    q = Fraction(quantum)
    total = sum((Fraction(u) * q) ** 2 / Fraction(lengths[i - 1]) for i, u in units.items())
    return float(total)


def optimal_quantized(instance: QuantizedInstance, lengths: Sequence[float]) -> tuple[Schedule, float]:
    """Exact minimizer of the squared-power objective over whole quanta.

    Units are routed one at a time along a cheapest residual path from the
    source. Sending one more unit into interval ``i`` holding ``u`` units
    costs ``q^2 (2u + 1) / L_i``; taking one back returns the cost of the
    last unit. Path costs can be negative, so a label-correcting search is
    used. With a separable convex cost, each cheapest augmentation keeps the
    flow optimal for its value.
    """
    q = instance.quantum
    jobs = list(instance.unit_demands)
    intervals = sorted({i for (_, i) in instance.unit_caps})
    # nodes: 0 source, jobs, intervals, sink
    jnode = {j: 1 + k for k, j in enumerate(jobs)}
    inode = {i: 1 + len(jobs) + k for k, i in enumerate(intervals)}
    node_interval = {v: i for i, v in inode.items()}
    sink = 1 + len(jobs) + len(intervals)
    n = sink + 1

    sent = {j: 0 for j in jobs}
    x = {(j, i): 0 for (j, i) in instance.unit_caps}
    load = {i: 0 for i in intervals}
    jobs_of = {i: [j for (j, ii) in instance.unit_caps if ii == i] for i in intervals}
    ivs_of = {j: instance.intervals_of(j) for j in jobs}

    def marginal(i, u):
        return q * q * (2 * u + 1) / lengths[i - 1]

    def arcs(v):
        if v == 0:
            for j in jobs:
                if sent[j] < instance.unit_demands[j]:
                    yield jnode[j], 0.0, ("src", j)
        elif v == sink:
            for i in intervals:
                if load[i] > 0:
                    yield inode[i], -marginal(i, load[i] - 1), ("unsink", i)
        elif v in node_interval:
            i = node_interval[v]
            yield sink, marginal(i, load[i]), ("sink", i)
            for j in jobs_of[i]:
                if x[(j, i)] > 0:
                    yield jnode[j], 0.0, ("back", (j, i))
        else:
            j = jobs[v - 1]
            for i in ivs_of[j]:
                if x[(j, i)] < instance.unit_caps[(j, i)]:
                    yield inode[i], 0.0, ("fwd", (j, i))

    total_units = sum(instance.unit_demands.values())
    for _ in range(total_units):
        # label-correcting (FIFO Bellman-Ford) from the source
        dist = [math.inf] * n
        pred: list = [None] * n
        dist[0] = 0.0
        queue = deque([0])
        queued = [False] * n
        queued[0] = True
        relaxations = 0
        while queue:
            v = queue.popleft()
            queued[v] = False
            for w, c, arc in arcs(v):
                if dist[v] + c < dist[w] - 1e-15:
                    dist[w] = dist[v] + c
                    pred[w] = (v, arc)
                    relaxations += 1
                    if relaxations > n * n * (n + 1):
                        raise OracleError("negative cycle in residual network")
                    if not queued[w]:
                        queued[w] = True
                        queue.append(w)
        if dist[sink] == math.inf:
            raise OracleError("quantized instance is infeasible")
        v = sink
        while v != 0:
            u, (kind, key) = pred[v]
            if kind == "src":
                sent[key] += 1
            elif kind == "fwd":
                x[key] += 1
            elif kind == "back":
                x[key] -= 1
            elif kind == "sink":
                load[key] += 1
            else:
                load[key] -= 1
            v = u

    energy = {(i, j): u * q for (j, i), u in x.items() if u > 0}
    schedule = Schedule(energy, frozenset(range(1, len(lengths) + 1)))
    return schedule, quantized_objective(load, q, lengths)


def brute_force_quantized(instance: QuantizedInstance, lengths: Sequence[float]) -> float:
    """Minimum objective by enumerating every quantized allocation (tiny instances only)."""
    per_job = []
    for j, units in instance.unit_demands.items():
        ivs = instance.intervals_of(j)
        caps = [instance.unit_caps[(j, i)] for i in ivs]
        options = [
            dict(zip(ivs, split))
            for split in itertools.product(*(range(c + 1) for c in caps))
            if sum(split) == units
        ]
        if not options:
            raise OracleError(f"job {j!r} cannot be quantized feasibly")
        per_job.append(options)
    best = math.inf
    for combo in itertools.product(*per_job):
        load: dict[int, int] = {}
        for alloc in combo:
            for i, u in alloc.items():
                load[i] = load.get(i, 0) + u
        best = min(best, quantized_objective(load, instance.quantum, lengths))
    return best


def quantization_bound(profile_values: Sequence[float], lengths: Sequence[float], quantum: float) -> float:
    """How far rounding to whole quanta can move the objective near ``profile_values``."""
    return math.fsum(2 * p * quantum + quantum * quantum / L for p, L in zip(profile_values, lengths))


def minmax_peak_bisect(
    jobs: Sequence[Job],
    timeline: Timeline | None,
    tol: float = 1e-9,
    method=MaxFlowMethod.DINITZ,
) -> float:
    """Smallest uniform power level under which all demand can be routed."""
    if not jobs or sum(job.demand for job in jobs) == 0:
        return 0.0
    demands = {job.id: job.demand for job in jobs}
    caps = {job.id: job.power_cap for job in jobs}
    total = math.fsum(demands.values())

    def feasible(level: float) -> bool:
        sink_caps = {i: level * timeline.length(i) for i in timeline.indices}
        net = maxflow.build_network(timeline, demands, sink_caps, caps)
        value = maxflow.max_flow(net, method).value
        return value >= total - 1e-12 * max(1.0, total)

    lo, hi = 0.0, float(sum(caps.values()))
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi
