import random

import pytest
from conftest import job_lists
from hypothesis import given, settings

from focs.generators import random_jobs
from focs.instance import Job, aggregate_profile, check_schedule, discretize
from focs.oracle import (
    OracleError,
    QuantizedInstance,
    brute_force_quantized,
    minmax_peak_bisect,
    optimal_quantized,
    quantization_bound,
)
from focs.scheduler import solve


def oracle(jobs, q):
    tl = discretize(jobs)
    schedule, value = optimal_quantized(QuantizedInstance.from_jobs(jobs, tl, q), tl.lengths)
    return tl, schedule, value


def test_staircase_oracle(staircase_jobs):
    tl, schedule, value = oracle(staircase_jobs, 0.5)
    assert value == 14.0
    assert aggregate_profile(schedule, tl).values == (2.0, 3.0, 1.0)
    assert check_schedule(staircase_jobs, tl, schedule) == []


def test_tied_oracle(tied_jobs):
    tl, schedule, value = oracle(tied_jobs, 0.5)
    assert value == 12.5
    assert aggregate_profile(schedule, tl).values == (2.5, 2.5)


def test_single_job_oracle():
    jobs = [Job(1, 0.0, 4.0, 8.0, 11.0)]
    tl = discretize(jobs)
    _, _, value = oracle(jobs, 0.5)
    assert value == pytest.approx(16.0)


def test_off_grid_demand_rejected(staircase_jobs):
    tl = discretize(staircase_jobs)
    with pytest.raises(OracleError):
        QuantizedInstance.from_jobs(staircase_jobs, tl, 0.3)


def test_unit_augmentation_matches_brute_force():
    rng = random.Random(11)
    checked = 0
    while checked < 60:
        jobs = random_jobs(rng, max_jobs=3, horizon=4, quantum=0.5, caps=(0.5, 1.0))
        tl = discretize(jobs)
        qi = QuantizedInstance.from_jobs(jobs, tl, 0.5)
        if sum(qi.unit_demands.values()) > 8:
            continue
        _, value = optimal_quantized(qi, tl.lengths)
        assert value == pytest.approx(brute_force_quantized(qi, tl.lengths), abs=1e-12)
        checked += 1


@settings(max_examples=40)
@given(job_lists(max_jobs=6))
def test_focs_within_quantization_bound(jobs):
    tl, schedule, value = oracle(jobs, 0.25)
    continuous = solve(jobs, tl).objective
    bound = quantization_bound(aggregate_profile(schedule, tl).values, tl.lengths, 0.25)
    assert -1e-9 <= value - continuous <= bound


def test_halving_quantum_tightens_gap():
    rng = random.Random(3)
    for _ in range(20):
        jobs = random_jobs(rng, max_jobs=6, quantum=0.5)
        tl = discretize(jobs)
        continuous = solve(jobs, tl).objective
        bounds = []
        for q in (0.5, 0.25, 0.125):
            _, schedule, value = oracle(jobs, q)
            bound = quantization_bound(aggregate_profile(schedule, tl).values, tl.lengths, q)
            assert -1e-9 <= value - continuous <= bound
            bounds.append(bound)
        assert bounds[0] >= bounds[1] >= bounds[2]


def test_fine_quantum_converges():
    jobs = [Job(1, 0.0, 3.0, 4.0, 2.0), Job(2, 1.0, 4.0, 3.0, 2.0), Job(3, 2.0, 3.0, 1.0, 3.0)]
    tl = discretize(jobs)
    continuous = solve(jobs, tl).objective
    _, _, value = oracle(jobs, 1.0 / 64)
    assert abs(value - continuous) / continuous < 1e-3


def test_bisect_examples(staircase):
    jobs, tl = staircase
    assert minmax_peak_bisect(jobs, tl) == pytest.approx(3.0, abs=1e-6)
    one = [Job(1, 0.0, 4.0, 8.0, 11.0)]
    assert minmax_peak_bisect(one, discretize(one)) == pytest.approx(2.0, abs=1e-6)


def test_bisect_empty_instance():
    assert minmax_peak_bisect([], None) == 0.0
    zero = [Job(1, 0.0, 1.0, 0.0, 1.0)]
    assert minmax_peak_bisect(zero, discretize(zero)) == 0.0


def test_brute_force_reports_unquantizable_job():
    # 1.5 kWh fits in 2 h at 0.75 kW, but each 1 h interval only holds one 0.5 kWh quantum
    jobs = [Job(1, 0.0, 2.0, 1.5, 0.75), Job(2, 1.0, 2.0, 0.0, 1.0)]
    tl = discretize(jobs)
    qi = QuantizedInstance.from_jobs(jobs, tl, 0.5)
    with pytest.raises(OracleError):
        brute_force_quantized(qi, tl.lengths)
    with pytest.raises(OracleError):
        optimal_quantized(qi, tl.lengths)
