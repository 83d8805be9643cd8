"""Seeded random instances and networks for property checks."""

from __future__ import annotations

import random

from .instance import Job
from .maxflow import FlowNetwork


def random_jobs(
    rng: random.Random,
    max_jobs: int = 12,
    horizon: int = 8,
    quantum: float = 0.25,
    caps: tuple[float, ...] = (1.0, 2.0, 3.0),
) -> list[Job]:
    """Feasible jobs on an integer-hour grid with demands that are multiples of ``quantum``."""
    n = rng.randint(1, max_jobs)
    jobs = []
    for k in range(n):
        a = rng.randint(0, horizon - 1)
        d = rng.randint(a + 1, min(horizon, a + rng.choice((1, 2, 3, horizon))))
        cap = rng.choice(caps)
        most = int(cap * (d - a) / quantum)
        demand = quantum * rng.randint(0, most)
        jobs.append(Job(k + 1, float(a), float(d), demand, cap))
    return jobs


def random_network(rng: random.Random, max_nodes: int = 12, max_edges: int = 40) -> FlowNetwork:
    """General directed network with mixed integer, real and zero capacities."""
    n = rng.randint(2, max_nodes)
    net = FlowNetwork(n)
    for _ in range(rng.randint(0, max_edges)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        kind = rng.random()
        if kind < 0.1:
            cap = 0.0
        elif kind < 0.5:
            cap = float(rng.randint(1, 9))
        else:
            cap = rng.uniform(0, 10)
        net.add_edge(u, v, cap)
    return net


def min_cut_brute_force(net: FlowNetwork) -> float:
    """Smallest s-t cut by enumerating every vertex bipartition."""
    others = [v for v in range(net.num_nodes) if v not in (net.source, net.sink)]
    best = float("inf")
    for mask in range(1 << len(others)):
        side = {net.source} | {v for k, v in enumerate(others) if mask >> k & 1}
        cut = sum(c for _, u, v, c in net.edges() if u in side and v not in side)
        best = min(best, cut)
    return best
