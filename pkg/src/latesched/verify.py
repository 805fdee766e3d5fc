"""Batch verification: generate instances, solve, and check the solver claims.

Every emitted result document is first re-checked by independent re-timing
of its sequence and compressions. The remaining checks compare the solver
output with the exhaustive oracles and with the iteration-trace invariants.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .algorithms import (
    SolveOutcome,
    algorithm2,
    algorithm3_stage1,
    algorithm3_stage2,
    is_well_balanced,
)
from .documents import parse_result, write_result
from .generate import BudgetPolicy, gen_instance
from .kernels import extract_kernels
from .model import Instance
from .oracle import OracleLimitError, oracle_compressible, oracle_generic


@dataclass(frozen=True)
class Violation:
    trial: int
    seed: int
    check: str
    detail: str

    def __str__(self) -> str:
        return f"trial {self.trial} (seed {self.seed}): {self.check}: {self.detail}"


@dataclass
class VerifyReport:
    algorithm: str
    trials: int
    violations: list[Violation] = field(default_factory=list)
    skipped_oracle: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def _document_problems(outcome: SolveOutcome, instance: Instance) -> list[str]:
    return parse_result(write_result(outcome, instance)).check_against(instance)


def _oracle_matches(outcome: SolveOutcome, instance: Instance) -> str | None:
    """Mismatch description, or None when the oracle agrees."""
    best = oracle_generic(instance, outcome.compression)
    if best != outcome.max_lateness:
        return f"L={outcome.max_lateness} but the optimum for its processing times is {best}"
    return None


def check_algorithm2(instance: Instance, budget_binds: bool) -> tuple[list[tuple[str, str]], int]:
    """Checks for one Algorithm 2 run; returns (failures, oracle skips)."""
    failures: list[tuple[str, str]] = []
    skipped = 0
    out = algorithm2(instance)
    failures += [("retiming", p) for p in _document_problems(out, instance)]
    if not out.feasible:
        failures.append(("budget", f"cost {out.total_cost} > U={instance.budget}"))
    levels = [it.max_lateness for it in out.trace.iterations]
    for h, (a, b) in enumerate(zip(levels, levels[1:])):
        if a - b != 1:
            failures.append(("decrement", f"L went {a} -> {b} after iteration {h}"))
            break
    if len(levels) - 1 >= max(instance.p_max, 1):
        failures.append(("iterations", f"{len(levels) - 1} compression rounds, p_max={instance.p_max}"))
    if not budget_binds:
        if out.certificate is None:
            failures.append(("certificate", f"no certificate ({out.trace.terminal_reason})"))
        try:
            mismatch = _oracle_matches(out, instance)
        except OracleLimitError:
            skipped += 1
        else:
            if mismatch:
                failures.append(("oracle", mismatch))
    return failures, skipped


def check_algorithm3(instance: Instance, budget_binds: bool) -> tuple[list[tuple[str, str]], int]:
    """Checks for one Algorithm 3 run (both stages); returns (failures, oracle skips).

    Stage 1 ignores the budget, so its claims are checked whether or not the
    budget binds.
    """
    failures: list[tuple[str, str]] = []
    skipped = 0
    stage1 = algorithm3_stage1(instance)
    final = algorithm3_stage2(stage1, instance)
    failures += [("retiming", p) for p in _document_problems(final, instance)]
    if not final.feasible:
        failures.append(("budget", f"cost {final.total_cost} > U={instance.budget}"))
    new_kernels = sum(it.new_kernels for it in stage1.trace.iterations)
    if new_kernels > len(instance):
        failures.append(("new-kernels", f"{new_kernels} new kernels for n={len(instance)}"))
    for it in stage1.trace.iterations:
        if it.level is not None and it.level > it.max_lateness:
            failures.append(("lambda", f"iteration {it.h}: level {it.level} > L {it.max_lateness}"))
            break
    if stage1.certificate is None:
        failures.append(("certificate", f"stage 1 ended without one ({stage1.trace.terminal_reason})"))
    x = stage1.compression
    compressed = [v for v in x.values() if v > 0]
    if compressed and not is_well_balanced(stage1.schedule, instance, min(2, min(compressed))):
        failures.append(("well-balanced", "stage-1 schedule is not well-balanced"))
    if final.xi is not None and final.xi <= min(compressed):
        same = {k.job_set for k in extract_kernels(stage1.schedule, instance)} == {
            k.job_set for k in extract_kernels(final.schedule, instance)
        }
        if same and final.max_lateness != stage1.max_lateness + final.xi:
            failures.append(
                ("repair", f"L {stage1.max_lateness} + xi {final.xi} != {final.max_lateness}")
            )
    try:
        mismatch = _oracle_matches(stage1, instance)
    except OracleLimitError:
        skipped += 1
    else:
        if mismatch:
            failures.append(("oracle", "stage 1: " + mismatch))
    levels = [it.level for it in stage1.trace.iterations if it.level is not None]
    if levels:
        try:
            best, _ = oracle_compressible(instance)
        except OracleLimitError:
            skipped += 1
        else:
            if max(levels) > best:
                failures.append(("lambda-bound", f"level {max(levels)} above the optimum {best}"))
    return failures, skipped


CHECKS = {"2": check_algorithm2, "3": check_algorithm3}


def _trial(args: tuple[str, int, int, int, int, int, str]) -> tuple[list[tuple[str, str]], int]:
    alg, trial_seed, n, max_processing, horizon, cost_max, policy = args
    instance = gen_instance(n, trial_seed, max_processing, horizon, cost_max, policy)
    binds = BudgetPolicy.parse(policy).kind != "unbounded"
    return CHECKS[alg](instance, binds)


def run_verify(
    alg: str,
    trials: int,
    seed: int,
    n: int,
    max_processing: int = 3,
    horizon: int = 10,
    cost_max: int = 2,
    budget_policy: str = "unbounded",
    workers: int = 1,
) -> VerifyReport:
    """Run ``trials`` generated instances; trial ``t`` uses seed ``seed + t``.

    The report lists violations in trial order whatever ``workers`` is.
    """
    if alg not in CHECKS:
        raise ValueError(f"verify supports algorithms {sorted(CHECKS)}, not {alg!r}")
    BudgetPolicy.parse(budget_policy)
    tasks = [
        (alg, seed + t, n, max_processing, horizon, cost_max, budget_policy) for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_trial, tasks))
    else:
        results = [_trial(task) for task in tasks]
    report = VerifyReport(alg, trials)
    for t, (failures, skipped) in enumerate(results):
        report.skipped_oracle += skipped
        report.violations += [Violation(t, seed + t, check, detail) for check, detail in failures]
    return report
