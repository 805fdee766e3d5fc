"""Compression algorithms for 1|r_j, compressible(U)|L_max.

All three solvers start from the ED schedule of the uncompressed instance,
regularize it, and then shorten the delaying emerging jobs of its kernels.
After every compression step the ED schedule is rebuilt with the new
processing times:

* :func:`algorithm1` compresses every delaying emerging job by the smallest
  kernel delay once.
* :func:`algorithm2` compresses them one time unit at a time, regularizing
  after each step, until a kernel has no delaying emerging job or the budget
  would be exceeded.
* :func:`algorithm3_stage1` jumps by the smallest delay, then dis-compresses
  the overshoot so that all kernels stay at one lateness level; it ignores the
  budget. :func:`algorithm3_stage2` gives back compression until the budget
  holds again.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, field

from .ed import ed_schedule, initial_schedule
from .kernels import Kernel, certificate_kernel, extract_kernels, regularize
from .model import (
    Instance,
    JobId,
    Schedule,
    is_feasible,
    lateness_profile,
    max_lateness,
    retime,
    total_cost,
)

NO_EMERGING = "no-delaying-emerging-job"
BUDGET_EXHAUSTED = "budget-exhausted"
NO_NEW_KERNEL = "no-new-kernel"
EMERGING_EXHAUSTED = "emerging-jobs-exhausted"
CONDITIONS_FAILED = "conditions-failed"
REPAIRED = "budget-repaired"


class AlgorithmError(RuntimeError):
    """An iteration bound guaranteed by the method was exceeded."""


@dataclass(frozen=True)
class Iteration:
    h: int
    level: int | None
    delta_min: int | None
    max_lateness: int
    cost: int
    kernels: tuple[Kernel, ...]
    new_kernels: int = 0
    deltas: dict[JobId, int] = field(default_factory=dict)


@dataclass
class RunTrace:
    iterations: list[Iteration] = field(default_factory=list)
    compressed_emerging: tuple[JobId, ...] = ()
    terminal_reason: str | None = None

    def record(self, iteration: Iteration) -> None:
        self.iterations.append(iteration)


@dataclass(frozen=True)
class SolveOutcome:
    algorithm: str
    schedule: Schedule
    total_cost: int
    max_lateness: int
    feasible: bool
    certificate: Kernel | None
    trace: RunTrace
    optimal: bool = False
    xi: int | None = None

    @property
    def compression(self) -> dict[JobId, int]:
        return self.schedule.compression


def _outcome(
    algorithm: str,
    schedule: Schedule,
    instance: Instance,
    trace: RunTrace,
    *,
    optimal: bool | None = None,
    xi: int | None = None,
) -> SolveOutcome:
    x = schedule.compression
    certificate = certificate_kernel(extract_kernels(schedule, instance))
    feasible = is_feasible(x, instance)
    if optimal is None:
        optimal = certificate is not None and feasible
    trace.compressed_emerging = tuple(j for j in schedule.sequence if x[j] > 0)
    return SolveOutcome(
        algorithm,
        schedule,
        total_cost(x, instance),
        max_lateness(schedule, instance),
        feasible,
        certificate,
        trace,
        optimal,
        xi,
    )


def _shift(
    x: dict[JobId, int], instance: Instance, jobs: Iterable[JobId], amount: int
) -> dict[JobId, int]:
    """Compress (amount > 0) or dis-compress (amount < 0), clamped to ``[0, a_j]``."""
    out = dict(x)
    for j in dict.fromkeys(jobs):
        out[j] = min(instance.job(j).base_processing, max(0, out[j] + amount))
    return out


def _deltas(before: dict[JobId, int], after: dict[JobId, int]) -> dict[JobId, int]:
    return {j: after[j] - before[j] for j in after if after[j] != before[j]}


def _emerging(kernels: Iterable[Kernel]) -> list[JobId]:
    return list(dict.fromkeys(k.delaying_emerging for k in kernels if k.delaying_emerging))


def _family(kernels: Iterable[Kernel]) -> set[frozenset[JobId]]:
    return {k.job_set for k in kernels}


def _raise_to(
    schedule: Schedule, instance: Instance, kernels: dict[frozenset[JobId], JobId], target: int
) -> dict[JobId, int]:
    """Dis-compress each kernel's emerging job so the kernel's lateness rises to ``target``.

    Kernels already at or above ``target`` are left alone.
    """
    lateness, _ = lateness_profile(schedule, instance)
    x = dict(schedule.compression)
    for jobs, e in kernels.items():
        gap = target - max(lateness[j] for j in jobs)
        if gap > 0:
            x[e] = max(0, x[e] - gap)
    return x


def _compressed(instance: Instance, x: dict[JobId, int]) -> Schedule:
    """The ED schedule of the instance with processing times ``a_j - x_j``.

    Compression moves later jobs left, and with new release/completion
    relations the ED order itself can change; rebuilding keeps every
    compressed schedule an ED schedule, so a kernel that starts late always
    has a job right in front of it.
    """
    return ed_schedule(instance, x)


def regularized_start(instance: Instance) -> Schedule:
    """``(sigma)*``: the regularized ED schedule of the uncompressed instance."""
    return regularize(initial_schedule(instance), instance)


def algorithm1(instance: Instance) -> SolveOutcome:
    """Compress each delaying emerging job of ``(sigma)*`` by its smallest delay.

    The result is flagged optimal when the compression fits the budget and no
    new kernel appears (the kernel job sets are those of ``(sigma)*``).
    """
    start = regularized_start(instance)
    kernels = extract_kernels(start, instance)
    trace = RunTrace()
    x0 = start.compression
    trace.record(Iteration(0, None, None, max_lateness(start, instance), 0, tuple(kernels)))
    if certificate_kernel(kernels) is not None or not _emerging(kernels):
        trace.terminal_reason = NO_EMERGING
        return _outcome("algorithm1", start, instance, trace)

    dmin = min(k.delta for k in kernels if k.delta is not None)
    level = max_lateness(start, instance) - dmin
    x = _shift(x0, instance, _emerging(kernels), dmin)
    result = _compressed(instance, x)
    after = extract_kernels(result, instance)
    trace.record(
        Iteration(
            1,
            level,
            dmin,
            max_lateness(result, instance),
            total_cost(x, instance),
            tuple(after),
            len(_family(after) - _family(kernels)),
            _deltas(x0, x),
        )
    )
    same_kernels = _family(after) == _family(kernels)
    trace.terminal_reason = NO_NEW_KERNEL if same_kernels else CONDITIONS_FAILED
    optimal = same_kernels and is_feasible(x, instance)
    return _outcome("algorithm1", result, instance, trace, optimal=optimal)


def algorithm2(instance: Instance) -> SolveOutcome:
    """Unit-step compression of every kernel's delaying emerging job.

    Each round compresses the delaying emerging job of every kernel by one
    unit (jobs already at zero length are skipped), stops if the new
    compression vector exceeds the budget, and otherwise regularizes and
    repeats. The returned schedule always fits the budget.
    """
    schedule = regularized_start(instance)
    trace = RunTrace()
    budget_bound = False
    h = 0
    # each round lowers some processing time by one unit
    limit = sum(j.base_processing for j in instance.jobs) + 1
    while True:
        kernels = extract_kernels(schedule, instance)
        x = schedule.compression
        trace.record(
            Iteration(
                h,
                None,
                min((k.delta for k in kernels if k.delta is not None), default=None),
                max_lateness(schedule, instance),
                total_cost(x, instance),
                tuple(kernels),
            )
        )
        if any(k.delaying_emerging is None for k in kernels):
            trace.terminal_reason = NO_EMERGING
            break
        movable = [e for e in _emerging(kernels) if x[e] < instance.job(e).base_processing]
        if not movable:
            trace.terminal_reason = EMERGING_EXHAUSTED
            break
        x_next = _shift(x, instance, movable, 1)
        if not is_feasible(x_next, instance):
            trace.terminal_reason = BUDGET_EXHAUSTED
            budget_bound = True
            break
        schedule = regularize(_compressed(instance, x_next), instance)
        h += 1
        if h > limit:
            raise AlgorithmError("unit compression did not terminate")
    outcome = _outcome("algorithm2", schedule, instance, trace)
    if budget_bound:
        return SolveOutcome(**{**outcome.__dict__, "optimal": False})
    return outcome


def algorithm3_stage1(instance: Instance) -> SolveOutcome:
    """Polynomial stage: jump-compress, then balance kernels at one lateness level.

    ``level`` tracks the lateness every kernel met so far has been brought to.
    Each round regularizes the current schedule and compresses its kernels'
    delaying emerging jobs by the smallest delay. If that pushes them above
    ``level``, the earlier kernels are dis-compressed up to the new level;
    if below, the new kernels are dis-compressed back up to ``level``. The
    loop ends once the maximum lateness equals ``level`` with a kernel that
    starts at its minimum release. The budget is ignored.
    """
    start = regularized_start(instance)
    kernels = extract_kernels(start, instance)
    trace = RunTrace()
    x0 = start.compression
    trace.record(Iteration(0, None, None, max_lateness(start, instance), 0, tuple(kernels)))
    if certificate_kernel(kernels) is not None or not _emerging(kernels):
        trace.terminal_reason = NO_EMERGING
        return _outcome("algorithm3-stage1", start, instance, trace)

    n = len(instance)
    dmin = min(k.delta for k in kernels if k.delta is not None)
    level = max_lateness(start, instance) - dmin
    x = _shift(x0, instance, _emerging(kernels), dmin)
    # kernel job set -> the delaying emerging job compressed for it
    family: dict[frozenset[JobId], JobId] = {
        k.job_set: k.delaying_emerging for k in kernels if k.delaying_emerging
    }
    schedule = _compressed(instance, x)
    deltas = _deltas(x0, x)
    new_count = len(family)
    h = 1
    while True:
        current = max_lateness(schedule, instance)
        trace.record(
            Iteration(
                h,
                level,
                dmin,
                current,
                total_cost(schedule.compression, instance),
                tuple(extract_kernels(schedule, instance)),
                new_count,
                deltas,
            )
        )
        if h > n + 1:
            raise AlgorithmError(f"stage 1 exceeded {n + 1} iterations")
        if current <= level and certificate_kernel(extract_kernels(schedule, instance)):
            trace.terminal_reason = NO_NEW_KERNEL
            break

        regular = regularize(schedule, instance)
        kernels = extract_kernels(regular, instance)
        x = regular.compression
        if certificate_kernel(kernels) is not None or not _emerging(kernels):
            # settle earlier kernels at the level the new kernel fixes
            current_sets = _family(kernels)
            prior = {ks: e for ks, e in family.items() if ks not in current_sets}
            x_next = _raise_to(regular, instance, prior, max_lateness(regular, instance))
            schedule = _compressed(instance, x_next)
            trace.record(
                Iteration(
                    h + 1,
                    level,
                    None,
                    max_lateness(schedule, instance),
                    total_cost(x_next, instance),
                    tuple(extract_kernels(schedule, instance)),
                    0,
                    _deltas(x, x_next),
                )
            )
            trace.terminal_reason = NO_EMERGING
            break

        dmin = min(k.delta for k in kernels if k.delta is not None)
        x_jump = _shift(x, instance, _emerging(kernels), dmin)
        jumped = _compressed(instance, x_jump)
        lateness, _ = lateness_profile(jumped, instance)
        reached = max(lateness[k.overflow] for k in kernels)
        current_sets = _family(kernels)
        new = [k for k in kernels if k.job_set not in family]
        x_next = x_jump
        if reached > level:
            prior = {ks: e for ks, e in family.items() if ks not in current_sets}
            x_next = _raise_to(jumped, instance, prior, reached)
            level = reached
        elif reached < level:
            x_next = _shift(x_jump, instance, _emerging(new), reached - level)
        for k in kernels:
            if k.delaying_emerging:
                family.setdefault(k.job_set, k.delaying_emerging)
        new_count = len(new)
        deltas = _deltas(x, x_next)
        schedule = _compressed(instance, x_next)
        h += 1

    return _outcome("algorithm3-stage1", schedule, instance, trace)


def algorithm3_stage2(stage1: SolveOutcome, instance: Instance) -> SolveOutcome:
    """Give back compression of the compressed emerging jobs until the budget holds.

    Every compressed job first gets ``xi = ceil(excess / k)`` units back
    (``k`` compressed jobs, never below zero compression); any remaining excess
    is removed one unit at a time, round robin in schedule order.
    """
    if stage1.feasible:
        return SolveOutcome(**{**stage1.__dict__, "algorithm": "algorithm3"})
    schedule = stage1.schedule
    x = dict(schedule.compression)
    compressed = [j for j in schedule.sequence if x[j] > 0]
    excess = total_cost(x, instance) - instance.budget
    xi = math.ceil(excess / len(compressed))
    x_next = _shift(x, instance, compressed, -xi)
    while total_cost(x_next, instance) > instance.budget:
        for j in compressed:
            if x_next[j] > 0 and total_cost(x_next, instance) > instance.budget:
                x_next[j] -= 1
    repaired = retime(schedule, instance, x_next)
    trace = RunTrace(list(stage1.trace.iterations))
    trace.record(
        Iteration(
            len(trace.iterations),
            None,
            None,
            max_lateness(repaired, instance),
            total_cost(x_next, instance),
            tuple(extract_kernels(repaired, instance)),
            0,
            _deltas(x, x_next),
        )
    )
    trace.terminal_reason = REPAIRED
    out = _outcome("algorithm3", repaired, instance, trace, optimal=False, xi=xi)
    trace.compressed_emerging = stage1.trace.compressed_emerging
    return out


def algorithm3(instance: Instance) -> SolveOutcome:
    return algorithm3_stage2(algorithm3_stage1(instance), instance)


def is_well_balanced(schedule: Schedule, instance: Instance, tau_max: int) -> bool:
    """Check that giving back ``tau`` units on every compressed job raises L by ``tau``.

    Checked for each ``tau`` from 1 up to ``tau_max`` (and no further than the
    smallest compression among those jobs).
    """
    x = schedule.compression
    compressed = [j for j in schedule.sequence if x[j] > 0]
    if not compressed:
        raise ValueError("schedule has no compressed job")
    base = max_lateness(schedule, instance)
    for tau in range(1, min(tau_max, min(x[j] for j in compressed)) + 1):
        relaxed = retime(schedule, instance, _shift(x, instance, compressed, -tau))
        if max_lateness(relaxed, instance) - base != tau:
            return False
    return True


SOLVERS = {
    "1": algorithm1,
    "2": algorithm2,
    "3": algorithm3,
}
