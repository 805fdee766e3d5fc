from pathlib import Path

import pytest
from hypothesis import strategies as st

from latesched.model import Instance, Job

DATA = Path(__file__).parent / "data"


def fixture_a(budget: int = 0) -> Instance:
    return Instance((Job("J1", 0, 20, 10, 1), Job("J2", 2, 6, 3, 2)), budget)


def fixture_b(budget: int = 0) -> Instance:
    return Instance((Job("J1", 0, 30, 6, 1), Job("J2", 1, 3, 2, 1), Job("J3", 9, 10, 2, 1)), budget)


def fixture_c(budget: int = 0) -> Instance:
    return Instance((Job("E", 0, 99, 5, 1), Job("I", 5, 10, 2, 1), Job("J", 2, 12, 4, 1)), budget)


@pytest.fixture
def inst_a() -> Instance:
    return fixture_a()


@pytest.fixture
def inst_b() -> Instance:
    return fixture_b()


@pytest.fixture
def inst_c() -> Instance:
    return fixture_c()


@st.composite
def instances(draw, max_jobs: int = 6, max_processing: int = 5, horizon: int = 12, budget=None):
    n = draw(st.integers(1, max_jobs))
    jobs = []
    for i in range(n):
        r = draw(st.integers(0, horizon))
        a = draw(st.integers(1, max_processing))
        d = draw(st.integers(1, r + a + horizon))
        c = draw(st.integers(1, 3))
        jobs.append(Job(f"J{i + 1}", r, d, a, c))
    full = sum(j.base_processing * j.unit_cost for j in jobs)
    u = draw(st.integers(0, full)) if budget is None else budget
    return Instance(tuple(jobs), u)


@st.composite
def compressed(draw, instance: Instance):
    return {j.id: draw(st.integers(0, j.base_processing)) for j in instance.jobs}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
