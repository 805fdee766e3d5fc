"""Kernels of a schedule and the kernel regularization procedure.

An *overflow job* attains the schedule's maximum lateness (the last one of
any run of such jobs processed back to back). The *kernel* of an overflow job ``o`` is
the longest run of jobs ending at ``o``, without idle time between them,
with due dates no larger than ``d_o``. When the kernel's first job starts later than the
earliest release among its jobs, the job right before it is the kernel's
*delaying emerging job* and the overshoot ``f_e - r(K)`` is the kernel's
delay.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .ed import ed_schedule, urgency_key
from .model import (
    Compression,
    Instance,
    JobId,
    Schedule,
    blocks_and_gaps,
    canonical_timing,
    lateness_profile,
)


class DecompositionError(RuntimeError):
    """Kernel decomposition failed to terminate within its depth guard."""


@dataclass(frozen=True)
class Kernel:
    first: int
    last: int
    jobs: tuple[JobId, ...]
    overflow: JobId
    min_release: int
    start: int
    delaying_emerging: JobId | None = None
    delta: int | None = None

    @property
    def job_set(self) -> frozenset[JobId]:
        return frozenset(self.jobs)

    @property
    def starts_at_release(self) -> bool:
        """True if the kernel cannot start any earlier (a lower-bound witness)."""
        return self.start == self.min_release


@dataclass(frozen=True)
class DecompositionResult:
    components: tuple[tuple[int, tuple[JobId, ...]], ...]
    omitted: tuple[JobId, ...]

    @property
    def jobs(self) -> list[JobId]:
        return [j for _, seq in self.components for j in seq]


def overflow_jobs(schedule: Schedule, instance: Instance) -> list[JobId]:
    lateness, worst = lateness_profile(schedule, instance)
    seq = schedule.sequence
    result = []
    for i, job_id in enumerate(seq):
        if lateness[job_id] != worst:
            continue
        if (
            i + 1 < len(seq)
            and lateness[seq[i + 1]] == worst
            and schedule.completions[job_id] == schedule.starts[seq[i + 1]]
        ):
            continue
        result.append(job_id)
    return result


def extract_kernels(schedule: Schedule, instance: Instance) -> list[Kernel]:
    seq = schedule.sequence
    kernels = []
    for o in overflow_jobs(schedule, instance):
        last = schedule.position(o)
        d_o = instance.job(o).due
        first = last
        # zero-length block boundaries do not stop a kernel, only real idle time
        while (
            first > 0
            and schedule.completions[seq[first - 1]] == schedule.starts[seq[first]]
            and instance.job(seq[first - 1]).due <= d_o
        ):
            first -= 1
        jobs = seq[first : last + 1]
        r_k = min(instance.job(j).release for j in jobs)
        start = schedule.starts[seq[first]]
        emerging = delta = None
        if start > r_k:
            emerging = _delaying_job(schedule, first)
            if emerging is not None:
                delta = schedule.completions[emerging] - r_k
        kernels.append(Kernel(first, last, jobs, o, r_k, start, emerging, delta))
    return kernels


def _delaying_job(schedule: Schedule, first: int) -> JobId | None:
    """The job whose completion holds back the job at index ``first``.

    Fully compressed (zero-length) jobs are passed over so that the job
    actually occupying the machine is found.
    """
    seq = schedule.sequence
    start = schedule.starts[seq[first]]
    i = first - 1
    while i >= 0 and schedule.completions[seq[i]] == start:
        if schedule.duration(seq[i]) > 0:
            return seq[i]
        i -= 1
    return None


def delta_min(schedule: Schedule, instance: Instance) -> int | None:
    deltas = [k.delta for k in extract_kernels(schedule, instance) if k.delta is not None]
    return min(deltas) if deltas else None


def certificate_kernel(kernels: Sequence[Kernel]) -> Kernel | None:
    """First kernel whose jobs start at their minimum release, if any."""
    for kernel in kernels:
        if kernel.delaying_emerging is None and kernel.starts_at_release:
            return kernel
    return None


def kernel_schedule(kernel: Kernel, instance: Instance, compression: Compression) -> Schedule:
    """ED schedule of the kernel's jobs alone, started at the kernel's minimum release."""
    return ed_schedule(instance, compression, kernel.jobs, kernel.min_release)


def is_regular(kernel: Kernel, schedule: Schedule, instance: Instance) -> bool:
    """Whether rescheduling the kernel alone keeps an overflow job of due date ``d_o``.

    When the partial schedule has several overflow jobs, the last one counts.
    """
    alone = kernel_schedule(kernel, instance, schedule.compression)
    return instance.job(overflow_jobs(alone, instance)[-1]).due == instance.job(kernel.overflow).due


def decompose_kernel(
    kernel_jobs: Sequence[JobId],
    instance: Instance,
    compression: Compression | None = None,
) -> DecompositionResult:
    """Collapse a kernel into substructure components.

    ``kernel_jobs`` must be given in their order in the source schedule. The
    kernel is rescheduled alone by ED from its minimum release. Every
    irregular kernel of that partial schedule whose delaying emerging job was
    moved forward (an anticipated job) loses that job to the omitted set, and
    the remaining jobs are rescheduled. This repeats until no such kernel is
    left; the gap-free segments of the final partial schedule are the
    components.
    """
    source = list(dict.fromkeys(kernel_jobs))
    omitted: list[JobId] = []
    remaining = list(source)
    for _ in range(len(source) + 1):
        part = ed_schedule(instance, compression, remaining, _min_release(instance, remaining))
        order = {j: i for i, j in enumerate(remaining)}
        anticipated = []
        for k in extract_kernels(part, instance):
            e = k.delaying_emerging
            if e is None or e in anticipated or is_regular(k, part, instance):
                continue
            if part.position(e) < order[e]:
                anticipated.append(e)
        if not anticipated:
            partition = blocks_and_gaps(part, instance)
            components = tuple(
                (part.starts[part.sequence[lo]], part.sequence[lo:hi]) for lo, hi in partition.blocks
            )
            return DecompositionResult(components, tuple(omitted))
        omitted.extend(anticipated)
        remaining = [j for j in remaining if j not in anticipated]
        if not remaining:
            return DecompositionResult((), tuple(omitted))
    raise DecompositionError(f"decomposition of {source} did not settle within {len(source)} levels")


def _min_release(instance: Instance, jobs: Sequence[JobId]) -> int:
    return min(instance.job(j).release for j in jobs)


def regularize(schedule: Schedule, instance: Instance) -> Schedule:
    """Return ``(S)*``: the schedule with every irregular kernel collapsed.

    Pass 1 drops each irregular kernel together with its delaying emerging job
    and puts the kernel's substructure components back at their own start
    times. Pass 2 reinserts the dropped emerging jobs and the jobs omitted by
    the decompositions: repeatedly, the most urgent pending job that can start
    inside the earliest idle gap goes there and everything after it is pushed
    right in its existing order.
    """
    kernels = extract_kernels(schedule, instance)
    irregular = [k for k in kernels if not is_regular(k, schedule, instance)]
    # a kernel may nest inside another one that reaches further back
    irregular = [
        k
        for k in irregular
        if not any(o is not k and o.first <= k.first and k.last <= o.last for o in irregular)
    ]
    if not irregular:
        return schedule

    x = schedule.compression
    dropped: set[JobId] = set()
    pending: list[JobId] = []
    placed: list[tuple[int, int, int, JobId]] = []
    for n, kernel in enumerate(irregular):
        dropped.update(kernel.jobs)
        if kernel.delaying_emerging is not None:
            dropped.add(kernel.delaying_emerging)
            pending.append(kernel.delaying_emerging)
        result = decompose_kernel(kernel.jobs, instance, x)
        pending.extend(result.omitted)
        for start, seq in result.components:
            timed = canonical_timing(seq, instance, x, start)
            placed.extend((timed.starts[j], 1, n, j) for j in seq)

    for i, job_id in enumerate(schedule.sequence):
        if job_id not in dropped:
            placed.append((schedule.starts[job_id], 0, i, job_id))
    placed.sort()
    sequence = [job_id for *_, job_id in placed]
    pending = [j for j in dict.fromkeys(pending) if j not in sequence]

    while pending:
        timed = canonical_timing(sequence, instance, x, schedule.origin)
        index, job_id = _earliest_gap_insertion(timed, instance, pending)
        sequence.insert(index, job_id)
        pending.remove(job_id)
    return canonical_timing(sequence, instance, x, schedule.origin)


def _earliest_gap_insertion(
    timed: Schedule, instance: Instance, pending: list[JobId]
) -> tuple[int, JobId]:
    seq = timed.sequence
    gap_start = timed.origin
    for index in range(len(seq) + 1):
        if index < len(seq):
            gap_end = timed.starts[seq[index]]
        else:
            gap_end = None
        if gap_end is None or gap_end > gap_start:
            fits = [
                j
                for j in pending
                if gap_end is None or max(gap_start, instance.job(j).release) < gap_end
            ]
            if fits:
                return index, min(fits, key=lambda j: urgency_key(instance, j))
        if index < len(seq):
            gap_start = timed.completions[seq[index]]
    raise AssertionError("the trailing gap admits every pending job")
