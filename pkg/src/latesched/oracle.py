"""Brute-force optimum of small instances, used to certify the solvers.

Earliest-start timing minimizes every completion time of a fixed sequence,
so enumerating sequences is exhaustive for maximum lateness. The
compressible variant additionally enumerates every integer compression
vector within the budget.
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache

import numpy as np

from .model import Compression, Instance, JobId, full_compression

GENERIC_MAX_JOBS = 8
COMPRESSIBLE_MAX_JOBS = 5
COMPRESSIBLE_MAX_VECTORS = 10**5
LIMIT_ENV = "LATESCHED_ORACLE_LIMIT"


class OracleLimitError(ValueError):
    """The instance is too large for exhaustive search."""


def _limits() -> tuple[int | None, int | None]:
    """Job-count and vector-count overrides from ``LATESCHED_ORACLE_LIMIT=N[,V]``."""
    raw = os.environ.get(LIMIT_ENV, "").strip()
    if not raw:
        return None, None
    jobs, _, vectors = raw.partition(",")
    try:
        return int(jobs), int(vectors) if vectors else None
    except ValueError:
        raise OracleLimitError(f"{LIMIT_ENV} must look like N or N,V, got {raw!r}") from None


@lru_cache(maxsize=16)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _scan(perms: np.ndarray, release: np.ndarray, proc: np.ndarray, due: np.ndarray) -> np.ndarray:
    """Maximum lateness of every permutation (rows of ``perms``)."""
    t = np.zeros(len(perms), dtype=np.int64)
    worst = np.full(len(perms), np.iinfo(np.int64).min, dtype=np.int64)
    for k in range(perms.shape[1]):
        col = perms[:, k]
        t = np.maximum(t, release[col]) + proc[col]
        worst = np.maximum(worst, t - due[col])
    return worst


def _arrays(instance: Instance) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    jobs = instance.jobs
    return (
        np.array([j.release for j in jobs], dtype=np.int64),
        np.array([j.base_processing for j in jobs], dtype=np.int64),
        np.array([j.due for j in jobs], dtype=np.int64),
    )


def _check_generic(instance: Instance, limit: int | None) -> None:
    env_jobs, _ = _limits()
    cap = limit if limit is not None else env_jobs if env_jobs is not None else GENERIC_MAX_JOBS
    if len(instance) > cap:
        raise OracleLimitError(f"{len(instance)} jobs exceeds the generic oracle limit of {cap}")
    if not instance.jobs:
        raise OracleLimitError("oracle needs at least one job")


def best_sequence(
    instance: Instance, compression: Compression | None = None, limit: int | None = None
) -> tuple[int, tuple[JobId, ...]]:
    """Optimal maximum lateness for fixed processing times and a sequence attaining it.

    Ties go to the lexicographically first permutation of instance order.
    """
    _check_generic(instance, limit)
    x = full_compression(instance, compression)
    release, base, due = _arrays(instance)
    proc = base - np.array([x[j.id] for j in instance.jobs], dtype=np.int64)
    perms = _permutations(len(instance))
    values = _scan(perms, release, proc, due)
    best = int(np.argmin(values))
    return int(values[best]), tuple(instance.jobs[i].id for i in perms[best])


def oracle_generic(
    instance: Instance, compression: Compression | None = None, limit: int | None = None
) -> int:
    """Exact ``L^opt`` of 1|r_j|L_max with processing times ``a_j - x_j``."""
    return best_sequence(instance, compression, limit)[0]


def oracle_compressible(
    instance: Instance, max_jobs: int | None = None, max_vectors: int | None = None
) -> tuple[int, dict[JobId, int]]:
    """Exact optimum over all sequences and budget-feasible integer compressions.

    Returns the optimal maximum lateness and the lexicographically smallest
    optimal compression vector (in instance job order).
    """
    env_jobs, env_vectors = _limits()
    job_cap = max_jobs if max_jobs is not None else env_jobs if env_jobs is not None else COMPRESSIBLE_MAX_JOBS
    vec_cap = (
        max_vectors
        if max_vectors is not None
        else env_vectors if env_vectors is not None else COMPRESSIBLE_MAX_VECTORS
    )
    n = len(instance)
    if n == 0:
        raise OracleLimitError("oracle needs at least one job")
    if n > job_cap:
        raise OracleLimitError(f"{n} jobs exceeds the compressible oracle limit of {job_cap}")
    space = 1
    for job in instance.jobs:
        space *= job.base_processing + 1
    if space > vec_cap:
        raise OracleLimitError(f"{space} compression vectors exceeds the limit of {vec_cap}")

    release, base, due = _arrays(instance)
    costs = [j.unit_cost for j in instance.jobs]
    perms = _permutations(n)
    best_value: int | None = None
    best_vector: tuple[int, ...] = (0,) * n
    for vector in _budget_vectors(instance, costs):
        value = int(_scan(perms, release, base - np.array(vector, dtype=np.int64), due).min())
        if best_value is None or value < best_value:
            best_value, best_vector = value, vector
    assert best_value is not None
    return best_value, {job.id: amount for job, amount in zip(instance.jobs, best_vector)}


def _budget_vectors(instance: Instance, costs: list[int]):
    """Compression vectors within budget, in lexicographic order."""
    budget = instance.budget
    jobs = instance.jobs

    def extend(prefix: tuple[int, ...], spent: int):
        i = len(prefix)
        if i == len(jobs):
            yield prefix
            return
        top = min(jobs[i].base_processing, (budget - spent) // costs[i])
        for amount in range(top + 1):
            yield from extend(prefix + (amount,), spent + amount * costs[i])

    yield from extend((), 0)
