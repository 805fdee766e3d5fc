"""Earliest-due-date (Jackson/Schrage) list scheduling."""

from __future__ import annotations

import heapq
from collections.abc import Iterable

from .model import Compression, Instance, JobId, ModelError, Schedule, canonical_timing, full_compression


def urgency_key(instance: Instance, job_id: JobId) -> tuple[int, int, JobId]:
    """Dispatch priority: earliest due date, then earliest release, then id."""
    job = instance.job(job_id)
    return (job.due, job.release, job_id)


def ed_schedule(
    instance: Instance,
    compression: Compression | None = None,
    job_subset: Iterable[JobId] | None = None,
    start_time: int = 0,
) -> Schedule:
    """Build a non-delay schedule by always running the most urgent released job.

    The machine becomes free at ``start_time`` at the earliest. Whenever it is
    free and some job is released, the released job with the smallest due date
    is started; otherwise the clock jumps to the next release.
    """
    x = full_compression(instance, compression)
    ids = list(instance.ids if job_subset is None else dict.fromkeys(job_subset))
    if not ids:
        raise ModelError("ED schedule needs at least one job")

    by_release = sorted(ids, key=lambda j: (instance.job(j).release, j))
    ready: list[tuple[int, int, JobId]] = []
    sequence: list[JobId] = []
    t = max(start_time, instance.job(by_release[0]).release)
    k = 0
    while len(sequence) < len(ids):
        while k < len(by_release) and instance.job(by_release[k]).release <= t:
            heapq.heappush(ready, urgency_key(instance, by_release[k]))
            k += 1
        if not ready:
            t = instance.job(by_release[k]).release
            continue
        *_, job_id = heapq.heappop(ready)
        sequence.append(job_id)
        t += instance.job(job_id).base_processing - x[job_id]

    return canonical_timing(sequence, instance, x, start_time)


def initial_schedule(instance: Instance) -> Schedule:
    """The ED schedule of the uncompressed instance, from time 0."""
    return ed_schedule(instance)
