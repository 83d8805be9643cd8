import hypothesis.strategies as st
import pytest
from hypothesis import settings

from focs.instance import Job, discretize

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, name, passed, detail=""):
        _ACCEPTANCE.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number} {name}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)


@pytest.fixture
def staircase_jobs():
    return [Job(1, 0.0, 2.0, 4.0, 2.0), Job(2, 1.0, 3.0, 2.0, 1.0)]


@pytest.fixture
def staircase(staircase_jobs):
    return staircase_jobs, discretize(staircase_jobs)


@pytest.fixture
def tied_jobs():
    return [
        Job(1, 0.0, 2.0, 2.0, 2.0),
        Job(2, 0.0, 1.0, 0.5, 2.0),
        Job(3, 1.0, 2.0, 0.5, 2.0),
        Job(4, 0.0, 2.0, 2.0, 2.0),
    ]


@pytest.fixture
def tied(tied_jobs):
    return tied_jobs, discretize(tied_jobs)


@st.composite
def job_lists(draw, max_jobs=8, horizon=8, quantum=0.25):
    """Feasible jobs on an integer grid, demands on the quantum grid."""
    n = draw(st.integers(1, max_jobs))
    jobs = []
    for k in range(n):
        a = draw(st.integers(0, horizon - 1))
        d = draw(st.integers(a + 1, horizon))
        cap = draw(st.sampled_from([0.5, 1.0, 2.0, 3.0]))
        units = draw(st.integers(0, int(cap * (d - a) / quantum)))
        jobs.append(Job(k + 1, float(a), float(d), units * quantum, cap))
    return jobs


@st.composite
def boundary_job_lists(draw):
    """Single jobs, copies of one job, and nested windows."""
    kind = draw(st.sampled_from(["single", "identical", "nested"]))
    cap = draw(st.sampled_from([1.0, 2.0, 11.0]))
    if kind == "single":
        a = draw(st.integers(0, 5))
        d = draw(st.integers(a + 1, 8))
        e = draw(st.integers(0, int(cap * (d - a) * 4))) / 4
        return [Job(1, float(a), float(d), e, cap)]
    if kind == "identical":
        k = draw(st.integers(2, 6))
        a = draw(st.integers(0, 5))
        d = draw(st.integers(a + 1, 8))
        e = draw(st.integers(0, int(cap * (d - a) * 4))) / 4
        return [Job(i + 1, float(a), float(d), e, cap) for i in range(k)]
    depth = draw(st.integers(2, 5))
    jobs = []
    for i in range(depth):
        a, d = float(i), float(2 * depth - i)
        e = draw(st.integers(0, int(cap * (d - a) * 4))) / 4
        jobs.append(Job(i + 1, a, d, e, cap))
    return jobs
