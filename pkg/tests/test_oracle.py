import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_a, fixture_b, instances
from latesched.model import Instance, Job
from latesched.oracle import (
    LIMIT_ENV,
    OracleLimitError,
    best_sequence,
    oracle_compressible,
    oracle_generic,
)

# exhaustive values computed once and frozen
FIXTURE_A_U100 = (-4, {"J1": 0, "J2": 3})


def test_generic_fixture_a():
    assert oracle_generic(fixture_a()) == -1
    assert best_sequence(fixture_a()) == (-1, ("J2", "J1"))


def test_generic_fixture_b():
    # J3 cannot complete before 11 while due at 10, so 1 is optimal
    assert oracle_generic(fixture_b()) == 1


def test_generic_single_job():
    inst = Instance((Job("J", 4, 5, 3, 1),))
    assert oracle_generic(inst) == 4 + 3 - 5


def test_generic_uses_compression():
    assert oracle_generic(fixture_a(), {"J2": 3}) == -4


def test_compressible_fixture_a():
    assert oracle_compressible(fixture_a(0)) == (-1, {"J1": 0, "J2": 0})
    assert oracle_compressible(fixture_a(100)) == FIXTURE_A_U100


def test_limits():
    big = Instance(tuple(Job(f"J{i}", 0, 5, 1, 1) for i in range(9)))
    with pytest.raises(OracleLimitError):
        oracle_generic(big)
    assert oracle_generic(big, limit=9) == 4
    with pytest.raises(OracleLimitError):
        oracle_compressible(Instance(tuple(Job(f"J{i}", 0, 5, 1, 1) for i in range(6))))
    with pytest.raises(OracleLimitError):
        oracle_compressible(fixture_a(100), max_vectors=10)


def test_env_override(monkeypatch):
    monkeypatch.setenv(LIMIT_ENV, "1")
    with pytest.raises(OracleLimitError):
        oracle_generic(fixture_a())
    monkeypatch.setenv(LIMIT_ENV, "2,10")
    with pytest.raises(OracleLimitError):
        oracle_compressible(fixture_a(100))
    monkeypatch.setenv(LIMIT_ENV, "junk")
    with pytest.raises(OracleLimitError):
        oracle_generic(fixture_a())


@settings(max_examples=100, deadline=None)
@given(instances(max_jobs=4, max_processing=3))
def test_zero_budget_matches_generic(inst):
    assert oracle_compressible(inst.with_budget(0))[0] == oracle_generic(inst)


@settings(max_examples=60, deadline=None)
@given(instances(max_jobs=4, max_processing=3), st.data())
def test_monotone_in_budget(inst, data):
    low = data.draw(st.integers(0, 6))
    high = low + data.draw(st.integers(0, 6))
    value_low, x = oracle_compressible(inst.with_budget(low))
    assert oracle_compressible(inst.with_budget(high))[0] <= value_low
    assert sum(x[j.id] * j.unit_cost for j in inst.jobs) <= low
    assert oracle_generic(inst, x) == value_low
