"""Single-machine scheduling with compressible jobs: minimize maximum lateness under a compression budget."""

from .algorithms import (
    SolveOutcome,
    algorithm1,
    algorithm2,
    algorithm3,
    algorithm3_stage1,
    algorithm3_stage2,
    is_well_balanced,
)
from .ed import ed_schedule, initial_schedule
from .generate import BudgetPolicy, gen_instance
from .kernels import Kernel, decompose_kernel, extract_kernels, is_regular, regularize
from .model import Instance, Job, ModelError, Schedule, canonical_timing, lateness_profile, total_cost
from .oracle import OracleLimitError, oracle_compressible, oracle_generic

__all__ = [
    "BudgetPolicy",
    "Instance",
    "Job",
    "Kernel",
    "ModelError",
    "OracleLimitError",
    "Schedule",
    "SolveOutcome",
    "algorithm1",
    "algorithm2",
    "algorithm3",
    "algorithm3_stage1",
    "algorithm3_stage2",
    "canonical_timing",
    "decompose_kernel",
    "ed_schedule",
    "extract_kernels",
    "gen_instance",
    "initial_schedule",
    "is_regular",
    "is_well_balanced",
    "lateness_profile",
    "oracle_compressible",
    "oracle_generic",
    "regularize",
    "total_cost",
]
