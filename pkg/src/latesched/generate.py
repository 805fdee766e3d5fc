"""Seeded random instance generation."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .model import Instance, Job


@dataclass(frozen=True)
class BudgetPolicy:
    """How the budget is derived from the full compression cost ``sum(a_j * c_j)``.

    ``kind`` is ``"zero"``, ``"unbounded"`` or ``"fraction"`` (with ``fraction``
    in ``[0, 1]``). An unbounded budget equals the full compression cost, so it
    can never bind.
    """

    kind: str = "unbounded"
    fraction: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "unbounded", "fraction"):
            raise ValueError(f"unknown budget policy {self.kind!r}")
        if self.kind == "fraction" and (self.fraction is None or not 0 <= self.fraction <= 1):
            raise ValueError("fraction budget policy needs a fraction in [0, 1]")

    def budget(self, jobs: list[Job]) -> int:
        full = sum(j.base_processing * j.unit_cost for j in jobs)
        if self.kind == "zero":
            return 0
        if self.kind == "unbounded":
            return full
        return math.floor(self.fraction * full)

    @classmethod
    def parse(cls, text: str) -> BudgetPolicy:
        """Parse ``zero``, ``unbounded`` or ``fraction:F``."""
        kind, _, arg = text.partition(":")
        if kind == "fraction":
            return cls(kind, float(arg))
        if arg:
            raise ValueError(f"policy {kind!r} takes no argument")
        return cls(kind)

    def __str__(self) -> str:
        return f"fraction:{self.fraction}" if self.kind == "fraction" else self.kind


def gen_instance(
    n: int,
    seed: int,
    max_processing: int = 6,
    horizon: int = 20,
    cost_max: int = 3,
    budget_policy: BudgetPolicy | str = "unbounded",
) -> Instance:
    """Draw an instance; identical arguments always give the identical instance.

    Release ~ U[0, horizon], processing ~ U[1, max_processing],
    due ~ U[r + 1, r + a + horizon], unit cost ~ U[1, cost_max].
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_processing < 1 or horizon < 1 or cost_max < 1:
        raise ValueError("max_processing, horizon and cost_max must be positive")
    if isinstance(budget_policy, str):
        budget_policy = BudgetPolicy.parse(budget_policy)
    rng = random.Random(seed)
    jobs = []
    for i in range(1, n + 1):
        r = rng.randint(0, horizon)
        a = rng.randint(1, max_processing)
        d = rng.randint(r + 1, r + a + horizon)
        c = rng.randint(1, cost_max)
        jobs.append(Job(f"J{i}", r, d, a, c))
    return Instance(tuple(jobs), budget_policy.budget(jobs))
