"""Problem data model for single-machine scheduling with compressible jobs.

Every job has a release time, a due date, a base processing time and a
cost per unit of compression. A compression vector shortens processing
times (``p_j = a_j - x_j``) at total cost ``sum(x_j * c_j)``, which must not
exceed the instance budget.

Schedules are always *canonically timed*: a job sequence plus a compression
vector fully determine start and completion times (each job starts as soon as
it is released and the machine is free).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

JobId = str
Compression = Mapping[JobId, int]


class ModelError(ValueError):
    """Invalid job, instance, compression vector or sequence."""


@dataclass(frozen=True)
class Job:
    id: JobId
    release: int
    due: int
    base_processing: int
    unit_cost: int

    def __post_init__(self) -> None:
        for name in ("release", "due", "base_processing", "unit_cost"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ModelError(f"job {self.id!r}: {name} must be an integer, got {value!r}")
        if self.release < 0:
            raise ModelError(f"job {self.id!r}: release must be >= 0")
        if self.due < 1:
            raise ModelError(f"job {self.id!r}: due must be >= 1")
        if self.base_processing < 1:
            raise ModelError(f"job {self.id!r}: base_processing must be >= 1")
        if self.unit_cost < 1:
            raise ModelError(f"job {self.id!r}: unit_cost must be >= 1")


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]
    budget: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if isinstance(self.budget, bool) or not isinstance(self.budget, int) or self.budget < 0:
            raise ModelError(f"budget must be a non-negative integer, got {self.budget!r}")
        seen: set[JobId] = set()
        for job in self.jobs:
            if job.id in seen:
                raise ModelError(f"duplicate job id {job.id!r}")
            seen.add(job.id)

    @cached_property
    def by_id(self) -> dict[JobId, Job]:
        return {job.id: job for job in self.jobs}

    @property
    def ids(self) -> tuple[JobId, ...]:
        return tuple(job.id for job in self.jobs)

    @property
    def p_max(self) -> int:
        return max((job.base_processing for job in self.jobs), default=0)

    def __len__(self) -> int:
        return len(self.jobs)

    def job(self, job_id: JobId) -> Job:
        try:
            return self.by_id[job_id]
        except KeyError:
            raise ModelError(f"unknown job id {job_id!r}") from None

    def with_budget(self, budget: int) -> Instance:
        return Instance(self.jobs, budget)


def zero_compression(instance: Instance) -> dict[JobId, int]:
    return {job.id: 0 for job in instance.jobs}


def full_compression(instance: Instance, compression: Compression | None) -> dict[JobId, int]:
    """Return a complete, validated compression vector (missing jobs get 0)."""
    x = zero_compression(instance)
    if compression:
        for job_id, amount in compression.items():
            job = instance.job(job_id)
            if isinstance(amount, bool) or not isinstance(amount, int):
                raise ModelError(f"job {job_id!r}: compression must be an integer")
            if amount < 0 or amount > job.base_processing:
                raise ModelError(
                    f"job {job_id!r}: compression {amount} outside [0, {job.base_processing}]"
                )
            x[job_id] = amount
    return x


def processing_time(instance: Instance, compression: Compression, job_id: JobId) -> int:
    return instance.job(job_id).base_processing - compression.get(job_id, 0)


@dataclass(frozen=True, eq=False)
class Schedule:
    """A canonically timed job sequence.

    ``origin`` is the earliest start the timing was derived from; it is kept so
    the schedule can be re-timed after a compression change.
    """

    sequence: tuple[JobId, ...]
    compression: dict[JobId, int]
    starts: dict[JobId, int]
    completions: dict[JobId, int]
    origin: int = 0
    _positions: dict[JobId, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._positions.update({job_id: i for i, job_id in enumerate(self.sequence)})

    def __len__(self) -> int:
        return len(self.sequence)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schedule):
            return NotImplemented
        return (
            self.sequence == other.sequence
            and self.compression == other.compression
            and self.starts == other.starts
        )

    def position(self, job_id: JobId) -> int:
        return self._positions[job_id]

    def duration(self, job_id: JobId) -> int:
        return self.completions[job_id] - self.starts[job_id]

    @property
    def makespan(self) -> int:
        return self.completions[self.sequence[-1]] if self.sequence else self.origin


def canonical_timing(
    sequence: Iterable[JobId],
    instance: Instance,
    compression: Compression | None = None,
    earliest_start: int = 0,
) -> Schedule:
    """Time ``sequence`` so each job starts at ``max(release, previous completion)``."""
    sequence = tuple(sequence)
    if earliest_start < 0:
        raise ModelError("earliest_start must be >= 0")
    if len(set(sequence)) != len(sequence):
        raise ModelError("sequence repeats a job")
    x = full_compression(instance, compression)
    starts: dict[JobId, int] = {}
    completions: dict[JobId, int] = {}
    t = earliest_start
    for job_id in sequence:
        job = instance.job(job_id)
        s = max(t, job.release)
        t = s + job.base_processing - x[job_id]
        starts[job_id] = s
        completions[job_id] = t
    return Schedule(sequence, x, starts, completions, earliest_start)


def retime(schedule: Schedule, instance: Instance, compression: Compression) -> Schedule:
    """Keep the processing order, apply a new compression vector."""
    return canonical_timing(schedule.sequence, instance, compression, schedule.origin)


def lateness_profile(schedule: Schedule, instance: Instance) -> tuple[dict[JobId, int], int]:
    """Per-job lateness ``f_j - d_j`` and the schedule's maximum lateness."""
    if not schedule.sequence:
        raise ModelError("empty schedule has no lateness")
    lateness = {j: schedule.completions[j] - instance.job(j).due for j in schedule.sequence}
    return lateness, max(lateness.values())


def max_lateness(schedule: Schedule, instance: Instance) -> int:
    return lateness_profile(schedule, instance)[1]


def total_cost(compression: Compression, instance: Instance) -> int:
    return sum(amount * instance.job(j).unit_cost for j, amount in compression.items())


def is_feasible(compression: Compression, instance: Instance) -> bool:
    return total_cost(compression, instance) <= instance.budget


@dataclass(frozen=True)
class BlockPartition:
    """Blocks as half-open index ranges into the sequence, plus idle gaps.

    A gap ``(t, t)`` marks a block boundary where a job starts exactly at its
    release time as its predecessor completes.
    """

    blocks: tuple[tuple[int, int], ...]
    gaps: tuple[tuple[int, int], ...]

    def block_of(self, index: int) -> int:
        for b, (lo, hi) in enumerate(self.blocks):
            if lo <= index < hi:
                return b
        raise IndexError(index)


def starts_new_block(schedule: Schedule, instance: Instance, index: int) -> bool:
    if index == 0:
        return True
    job_id = schedule.sequence[index]
    prev_done = schedule.completions[schedule.sequence[index - 1]]
    start = schedule.starts[job_id]
    return start > prev_done or start == instance.job(job_id).release


def blocks_and_gaps(schedule: Schedule, instance: Instance) -> BlockPartition:
    seq = schedule.sequence
    if not seq:
        return BlockPartition((), ())
    blocks: list[tuple[int, int]] = []
    gaps: list[tuple[int, int]] = []
    lo = 0
    for i in range(1, len(seq)):
        if starts_new_block(schedule, instance, i):
            blocks.append((lo, i))
            gaps.append((schedule.completions[seq[i - 1]], schedule.starts[seq[i]]))
            lo = i
    blocks.append((lo, len(seq)))
    return BlockPartition(tuple(blocks), tuple(gaps))


def sequence_slices(schedule: Schedule, partition: BlockPartition) -> list[Sequence[JobId]]:
    return [schedule.sequence[lo:hi] for lo, hi in partition.blocks]
