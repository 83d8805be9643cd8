import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from focs.generators import min_cut_brute_force, random_network
from focs.instance import Job, discretize
from focs.maxflow import (
    FlowNetwork,
    MaxFlowMethod,
    build_network,
    immovable_intervals,
    max_flow,
    reaches_sink,
    saturated_sink_intervals,
)

METHODS = list(MaxFlowMethod)


def staircase_network(staircase, caps):
    jobs, tl = staircase
    return build_network(
        tl,
        {j.id: j.demand for j in jobs},
        dict(zip(tl.indices, caps)),
        {j.id: j.power_cap for j in jobs},
    )


def test_staircase_network_shape(staircase):
    net = staircase_network(staircase, (2, 2, 2))
    # s, t, two jobs, three intervals
    assert net.num_nodes == 7
    assert net.num_edges == 9
    n = 2
    assert net.num_nodes <= 3 * n + 1
    assert net.num_edges <= 2 * n * n + 2 * n - 1


def test_empty_network_has_zero_flow():
    tl = discretize([Job(1, 0.0, 1.0, 0.0, 1.0)])
    net = build_network(tl, {}, {}, {})
    assert net.num_nodes == 2
    for m in METHODS:
        assert max_flow(net, m).value == 0.0


def test_single_job_single_interval_saturates():
    tl = discretize([Job(1, 0.0, 1.0, 4.0, 4.0)])
    net = build_network(tl, {1: 4.0}, {1: 4.0}, {1: 4.0})
    for m in METHODS:
        assert max_flow(net, m).value == pytest.approx(4.0)


def test_zero_demand_job_keeps_zero_capacity_source_edge(staircase):
    jobs, tl = staircase
    net = build_network(tl, {1: 0.0, 2: 2.0}, {1: 1.0, 2: 1.0, 3: 1.0}, {1: 2.0, 2: 1.0})
    assert net.cap[net.source_edges[1]] == 0.0


def test_negative_capacity_rejected(staircase):
    jobs, tl = staircase
    with pytest.raises(ValueError):
        build_network(tl, {1: -1.0, 2: 2.0}, {1: 1.0, 2: 1.0, 3: 1.0}, {1: 2.0, 2: 1.0})
    with pytest.raises(ValueError):
        build_network(tl, {1: 1.0, 2: 2.0}, {1: 1.0, 2: -1.0, 3: 1.0}, {1: 2.0, 2: 1.0})
    with pytest.raises(ValueError):
        FlowNetwork(2).add_edge(0, 1, float("inf"))


@pytest.mark.parametrize("method", METHODS)
def test_staircase_round1_first_probe(staircase, method):
    net = staircase_network(staircase, (2, 2, 2))
    assert min_cut_brute_force(net) == pytest.approx(5.0)
    flow = max_flow(net, method)
    assert flow.value == pytest.approx(5.0)
    assert saturated_sink_intervals(net, flow) == {1, 2}


@pytest.mark.parametrize("method", METHODS)
def test_staircase_round1_third_probe(staircase, method):
    net = staircase_network(staircase, (2.5, 3, 2))
    flow = max_flow(net, method)
    assert flow.value == pytest.approx(6.0)
    assert 2 in saturated_sink_intervals(net, flow)
    assert immovable_intervals(net, flow) == {2}


def test_saturated_extremes(staircase):
    net = staircase_network(staircase, (0, 0, 0))
    assert saturated_sink_intervals(net, max_flow(net)) == {1, 2, 3}
    net = staircase_network(staircase, (10, 10, 10))
    assert saturated_sink_intervals(net, max_flow(net)) == set()


def test_immovable_single_interval():
    tl = discretize([Job(1, 0.0, 2.0, 3.0, 2.0)])
    net = build_network(tl, {1: 3.0}, {1: 3.0}, {1: 2.0})
    assert immovable_intervals(net, max_flow(net)) == {1}


def test_immovable_parallel_intervals_at_equal_level():
    jobs = [Job(1, 0.0, 1.0, 1.0, 1.0), Job(2, 1.0, 2.0, 1.0, 1.0)]
    tl = discretize(jobs)
    net = build_network(tl, {1: 1.0, 2: 1.0}, {1: 1.0, 2: 1.0}, {1: 1.0, 2: 1.0})
    for m in METHODS:
        assert immovable_intervals(net, max_flow(net, m)) == {1, 2}


def test_immovable_requires_demand_saturation(staircase):
    net = staircase_network(staircase, (2, 2, 2))
    with pytest.raises(ValueError):
        immovable_intervals(net, max_flow(net))


@pytest.mark.parametrize("method", METHODS)
def test_flow_is_valid(method):
    rng = random.Random(7)
    for _ in range(100):
        net = random_network(rng)
        res = max_flow(net, method)
        for e, u, v, c in net.edges():
            assert -1e-12 <= res.flow[e] <= c + 1e-9
        for x in range(net.num_nodes):
            if x not in (net.source, net.sink):
                assert abs(sum(res.flow[e] for e in net.adj[x])) < 1e-9
        assert res.value == pytest.approx(sum(res.flow[e] for e in net.adj[net.source]), abs=1e-9)
        # maximality: no residual path left
        assert not reaches_sink(net, res)[net.source]


def test_methods_agree_on_random_networks():
    rng = random.Random(2024)
    for _ in range(500):
        net = random_network(rng)
        values = [max_flow(net, m).value for m in METHODS]
        assert max(values) - min(values) <= 1e-9 * max(1.0, max(values))


@given(st.integers(0, 10**6))
def test_value_equals_min_cut(seed):
    net = random_network(random.Random(seed))
    cut = min_cut_brute_force(net)
    for m in METHODS:
        assert max_flow(net, m).value == pytest.approx(cut, rel=1e-9, abs=1e-9)


@given(st.integers(0, 10**6), st.floats(0, 5))
def test_raising_sink_capacity_is_monotone(seed, extra):
    rng = random.Random(seed)
    jobs = []
    for k in range(rng.randint(1, 6)):
        a = rng.randint(0, 4)
        jobs.append(Job(k, float(a), float(rng.randint(a + 1, 6)), float(rng.randint(0, 4)), 2.0))
    jobs = [j for j in jobs if j.is_feasible()] or [Job(0, 0.0, 1.0, 1.0, 1.0)]
    tl = discretize(jobs)
    demands = {j.id: j.demand for j in jobs}
    caps = {j.id: j.power_cap for j in jobs}
    sink = {i: rng.uniform(0, 3) for i in tl.indices}
    before = max_flow(build_network(tl, demands, sink, caps)).value
    target = rng.choice(list(tl.indices))
    sink[target] += extra
    after = max_flow(build_network(tl, demands, sink, caps)).value
    assert after >= before - 1e-12


def test_deterministic(staircase):
    for m in METHODS:
        a = max_flow(staircase_network(staircase, (2, 2, 2)), m)
        b = max_flow(staircase_network(staircase, (2, 2, 2)), m)
        assert a.flow == b.flow
