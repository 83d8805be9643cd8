"""Flow networks and four maximum-flow algorithms.

All algorithms share one representation: edges live in flat lists, with
edge ``e`` and its reverse ``e ^ 1`` stored next to each other. Flows are
antisymmetric (``flow[e ^ 1] == -flow[e]``), so the residual capacity of any
edge is ``cap[e] - flow[e]``. Neighbours are scanned in insertion order,
which `build_network` arranges to be ascending node index.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Mapping

from .instance import Timeline

# saturation / reachability tolerance, relative to the edge capacity (floored at 1)
SAT_TOL = 1e-9
# residual capacities below this (times the largest capacity) are numerical dust
_DUST = 1e-12


class MaxFlowMethod(enum.Enum):
    SHORTEST_AUGMENTING_PATH = "sap"
    EDMONDS_KARP = "ek"
    PREFLOW_PUSH = "pp"
    DINITZ = "dinitz"


class FlowNetwork:
    """Directed network with real capacities between a source and a sink."""

    def __init__(self, num_nodes: int, source: int = 0, sink: int | None = None):
        self.num_nodes = num_nodes
        self.source = source
        self.sink = num_nodes - 1 if sink is None else sink
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.head: list[int] = []
        self.cap: list[float] = []
        # populated by build_network
        self.job_nodes: dict[Hashable, int] = {}
        self.interval_nodes: dict[int, int] = {}
        self.sink_edges: dict[int, int] = {}
        self.source_edges: dict[Hashable, int] = {}
        self.assign_edges: dict[tuple[int, Hashable], int] = {}

    def add_edge(self, u: int, v: int, capacity: float) -> int:
        if not capacity >= 0 or capacity == float("inf"):
            raise ValueError(f"edge {u}->{v}: capacity must be finite and >= 0, got {capacity}")
        e = len(self.head)
        self.head += [v, u]
        self.cap += [float(capacity), 0.0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    @property
    def num_edges(self) -> int:
        return len(self.head) // 2

    def tail(self, e: int) -> int:
        return self.head[e ^ 1]

    def edges(self):
        """Yield ``(edge_id, u, v, capacity)`` for every forward edge."""
        for e in range(0, len(self.head), 2):
            yield e, self.head[e + 1], self.head[e], self.cap[e]

    def dust(self) -> float:
        return _DUST * max([1.0, *self.cap])


@dataclass
class FlowResult:
    network: FlowNetwork
    flow: list[float]
    value: float

    def edge_flow(self, e: int) -> float:
        return self.flow[e]

    def residual(self, e: int) -> float:
        return self.network.cap[e] - self.flow[e]

    def has_residual(self, e: int) -> bool:
        """Residual capacity beyond the saturation tolerance of the edge pair."""
        base = self.network.cap[e & ~1]
        return self.network.cap[e] - self.flow[e] > SAT_TOL * max(1.0, base)

    def is_saturated(self, e: int) -> bool:
        return not self.has_residual(e)


def build_network(
    timeline: Timeline,
    remaining_demands: Mapping[Hashable, float],
    sink_caps: Mapping[int, float],
    power_caps: Mapping[Hashable, float],
) -> FlowNetwork:
    """Source -> job -> interval -> sink network for the remaining instance.

    Only intervals listed in ``sink_caps`` take part. ``power_caps`` maps job
    ids to kW and bounds each job -> interval edge by ``power_cap * length``.
    """
    jobs = list(remaining_demands)
    intervals = sorted(sink_caps)
    net = FlowNetwork(2 + len(jobs) + len(intervals))
    for k, j in enumerate(jobs):
        net.job_nodes[j] = 1 + k
    for k, i in enumerate(intervals):
        net.interval_nodes[i] = 1 + len(jobs) + k

    for j in jobs:
        demand = remaining_demands[j]
        if demand < 0:
            raise ValueError(f"job {j!r}: negative remaining demand {demand}")
        net.source_edges[j] = net.add_edge(net.source, net.job_nodes[j], demand)
    for j in jobs:
        u = net.job_nodes[j]
        for i in timeline.avail_by_job[j]:
            if i in net.interval_nodes:
                cap = power_caps[j] * timeline.length(i)
                net.assign_edges[(i, j)] = net.add_edge(u, net.interval_nodes[i], cap)
    for i in intervals:
        if sink_caps[i] < 0:
            raise ValueError(f"interval {i}: negative sink capacity {sink_caps[i]}")
        net.sink_edges[i] = net.add_edge(net.interval_nodes[i], net.sink, sink_caps[i])
    return net


# --- algorithms -------------------------------------------------------------


def _augment_path(net: FlowNetwork, flow: list[float], path: list[int]) -> float:
    cap = net.cap
    delta = min(cap[e] - flow[e] for e in path)
    for e in path:
        flow[e] += delta
        flow[e ^ 1] -= delta
    return delta


def _distances_to(net: FlowNetwork, flow: list[float], target: int, eps: float) -> list[int]:
    """Hop distance to ``target`` through residual edges; ``num_nodes`` if unreachable."""
    n = net.num_nodes
    head, cap, adj = net.head, net.cap, net.adj
    dist = [n] * n
    dist[target] = 0
    queue = deque([target])
    while queue:
        x = queue.popleft()
        d = dist[x] + 1
        for e in adj[x]:
            r = e ^ 1  # edge head[e] -> x
            y = head[e]
            if dist[y] == n and cap[r] - flow[r] > eps:
                dist[y] = d
                queue.append(y)
    return dist


def edmonds_karp(net: FlowNetwork) -> FlowResult:
    s, t = net.source, net.sink
    head, cap, adj = net.head, net.cap, net.adj
    flow = [0.0] * len(head)
    eps = net.dust()
    while True:
        via = [-1] * net.num_nodes
        via[s] = -2
        queue = deque([s])
        while queue and via[t] == -1:
            u = queue.popleft()
            for e in adj[u]:
                v = head[e]
                if via[v] == -1 and cap[e] - flow[e] > eps:
                    via[v] = e
                    queue.append(v)
        if via[t] == -1:
            break
        path = []
        v = t
        while v != s:
            e = via[v]
            path.append(e)
            v = head[e ^ 1]
        _augment_path(net, flow, path)
    return _result(net, flow)


def dinitz(net: FlowNetwork) -> FlowResult:
    s, t, n = net.source, net.sink, net.num_nodes
    head, cap, adj = net.head, net.cap, net.adj
    flow = [0.0] * len(head)
    eps = net.dust()
    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = head[e]
                if level[v] < 0 and cap[e] - flow[e] > eps:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[t] < 0:
            break
        ptr = [0] * n
        path: list[int] = []
        u = s
        while True:
            if u == t:
                _augment_path(net, flow, path)
                # restart from the tail of the first saturated edge
                k = next(k for k, e in enumerate(path) if cap[e] - flow[e] <= eps)
                u = head[path[k] ^ 1]
                del path[k:]
                continue
            edges = adj[u]
            while ptr[u] < len(edges):
                e = edges[ptr[u]]
                v = head[e]
                if level[v] == level[u] + 1 and cap[e] - flow[e] > eps:
                    break
                ptr[u] += 1
            if ptr[u] < len(edges):
                path.append(edges[ptr[u]])
                u = head[edges[ptr[u]]]
                continue
            # dead end
            level[u] = -1
            if u == s:
                break
            e = path.pop()
            u = head[e ^ 1]
            ptr[u] += 1
    return _result(net, flow)


def shortest_augmenting_path(net: FlowNetwork) -> FlowResult:
    """Distance-labelled augmentation with advance/retreat and the gap rule."""
    s, t, n = net.source, net.sink, net.num_nodes
    head, cap, adj = net.head, net.cap, net.adj
    flow = [0.0] * len(head)
    eps = net.dust()
    dist = _distances_to(net, flow, t, eps)
    count = [0] * (n + 1)
    for d in dist:
        count[d] += 1
    ptr = [0] * n
    path: list[int] = []
    u = s
    while dist[s] < n:
        if u == t:
            _augment_path(net, flow, path)
            path.clear()
            u = s
            continue
        edges = adj[u]
        advanced = False
        while ptr[u] < len(edges):
            e = edges[ptr[u]]
            v = head[e]
            if dist[u] == dist[v] + 1 and cap[e] - flow[e] > eps:
                path.append(e)
                u = v
                advanced = True
                break
            ptr[u] += 1
        if advanced:
            continue
        # retreat: relabel u
        old = dist[u]
        new = n
        for e in edges:
            if cap[e] - flow[e] > eps and dist[head[e]] + 1 < new:
                new = dist[head[e]] + 1
        count[old] -= 1
        if count[old] == 0 and old < n:
            break  # gap: the sink is cut off from the source
        dist[u] = new
        count[new] += 1
        ptr[u] = 0
        if u != s:
            u = head[path.pop() ^ 1]
    return _result(net, flow)


def preflow_push(net: FlowNetwork) -> FlowResult:
    """Highest-label push-relabel with a global relabel every ``n`` relabels."""
    s, t, n = net.source, net.sink, net.num_nodes
    head, cap, adj = net.head, net.cap, net.adj
    flow = [0.0] * len(head)
    eps = net.dust()
    excess = [0.0] * n
    top = 2 * n

    for e in adj[s]:
        if e & 1 == 0 and cap[e] > 0:
            flow[e] = cap[e]
            flow[e ^ 1] = -cap[e]
            excess[head[e]] += cap[e]
            excess[s] -= cap[e]

    label = [0] * n
    buckets: list[list[int]] = []
    active = [False] * n

    def global_relabel():
        to_t = _distances_to(net, flow, t, eps)
        to_s = _distances_to(net, flow, s, eps)
        for v in range(n):
            if to_t[v] < n:
                label[v] = to_t[v]
            elif to_s[v] < n:
                label[v] = n + to_s[v]
            else:
                label[v] = top
        label[s] = n
        buckets[:] = [[] for _ in range(top + 1)]
        for v in range(n):
            active[v] = v != s and v != t and excess[v] > eps and label[v] < top
            if active[v]:
                buckets[label[v]].append(v)

    global_relabel()
    ptr = [0] * n
    highest = top
    relabels = 0
    while True:
        while highest >= 0 and not buckets[highest]:
            highest -= 1
        if highest < 0:
            break
        u = buckets[highest].pop()
        active[u] = False
        edges = adj[u]
        relabelled_all = False
        while excess[u] > eps:
            if ptr[u] == len(edges):
                new = top
                for e in edges:
                    if cap[e] - flow[e] > eps and label[head[e]] + 1 < new:
                        new = label[head[e]] + 1
                label[u] = new
                ptr[u] = 0
                relabels += 1
                if new >= top:
                    break  # remaining excess is dust
                if relabels % n == 0:
                    global_relabel()
                    relabelled_all = True
                    break
                continue
            e = edges[ptr[u]]
            v = head[e]
            r = cap[e] - flow[e]
            if r > eps and label[u] == label[v] + 1:
                delta = excess[u] if excess[u] < r else r
                flow[e] += delta
                flow[e ^ 1] -= delta
                excess[u] -= delta
                excess[v] += delta
                if v != s and v != t and not active[v] and excess[v] > eps:
                    buckets[label[v]].append(v)
                    active[v] = True
                    if label[v] > highest:
                        highest = label[v]
            else:
                ptr[u] += 1
        if relabelled_all:
            highest = top
        elif excess[u] > eps and label[u] < top and not active[u]:
            buckets[label[u]].append(u)
            active[u] = True
            highest = max(highest, label[u])
    return _result(net, flow)


_METHODS = {
    MaxFlowMethod.SHORTEST_AUGMENTING_PATH: shortest_augmenting_path,
    MaxFlowMethod.EDMONDS_KARP: edmonds_karp,
    MaxFlowMethod.PREFLOW_PUSH: preflow_push,
    MaxFlowMethod.DINITZ: dinitz,
}


def _result(net: FlowNetwork, flow: list[float]) -> FlowResult:
    t = net.sink
    value = sum(-flow[e] for e in net.adj[t])
    return FlowResult(net, flow, value)


def max_flow(net: FlowNetwork, method: MaxFlowMethod = MaxFlowMethod.SHORTEST_AUGMENTING_PATH) -> FlowResult:
    return _METHODS[MaxFlowMethod(method)](net)


# --- cut queries on FOCS networks --------------------------------------------


def saturated_sink_intervals(net: FlowNetwork, result: FlowResult) -> set[int]:
    return {i for i, e in net.sink_edges.items() if result.is_saturated(e)}


def reaches_sink(net: FlowNetwork, result: FlowResult) -> list[bool]:
    """Nodes with a residual path to the sink, at saturation tolerance."""
    n, t = net.num_nodes, net.sink
    head, adj = net.head, net.adj
    seen = [False] * n
    seen[t] = True
    stack = [t]
    while stack:
        x = stack.pop()
        for e in adj[x]:
            y = head[e]
            if not seen[y] and result.has_residual(e ^ 1):
                seen[y] = True
                stack.append(y)
    return seen


def bottleneck_intervals(net: FlowNetwork, result: FlowResult) -> set[int]:
    """Intervals that cannot pass any more flow to the sink, even by rerouting.

    These are the interval nodes on the source side of the maximal minimum
    cut; their sink edges are necessarily saturated.
    """
    seen = reaches_sink(net, result)
    return {i for i, v in net.interval_nodes.items() if not seen[v]}


def immovable_intervals(net: FlowNetwork, result: FlowResult) -> set[int]:
    """Saturated intervals whose load no alternative maximum flow can reduce.

    Requires a flow that meets every remaining demand.
    """
    demand = sum(net.cap[e] for e in net.source_edges.values())
    if result.value < demand - SAT_TOL * max(1.0, demand):
        raise ValueError(f"flow {result.value} does not saturate the total demand {demand}")
    return bottleneck_intervals(net, result)
