"""JSON instance/result documents and CSV trace export.

Both document kinds hold integers, strings, booleans and nulls only, and are
written with a fixed key order, so writing the same value twice gives the
same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Any

import jsonschema

from .algorithms import RunTrace, SolveOutcome
from .kernels import Kernel
from .model import Instance, Job, ModelError, canonical_timing, lateness_profile

INSTANCE_VERSION = "latesched-instance/1"
RESULT_VERSION = "latesched-result/1"
TRACE_COLUMNS = ("h", "lambda", "delta_min", "L", "cost")


class DocumentError(ValueError):
    """A document failed schema or semantic validation."""


_INT = {"type": "integer"}
_OPT_INT = {"type": ["integer", "null"]}
_ID = {"type": "string", "minLength": 1}
_ID_LIST = {"type": "array", "items": _ID}
_INT_MAP = {"type": "object", "additionalProperties": _INT}

INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["version", "budget", "jobs"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": INSTANCE_VERSION},
        "budget": {"type": "integer", "minimum": 0},
        "jobs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "release", "due", "processing", "unit_cost"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "release": {"type": "integer", "minimum": 0},
                    "due": {"type": "integer", "minimum": 1},
                    "processing": {"type": "integer", "minimum": 1},
                    "unit_cost": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}

_KERNEL_SCHEMA = {
    "type": "object",
    "required": ["jobs", "overflow", "min_release", "start", "emerging", "delta"],
    "additionalProperties": False,
    "properties": {
        "jobs": _ID_LIST,
        "overflow": _ID,
        "min_release": _INT,
        "start": _INT,
        "emerging": {"type": ["string", "null"]},
        "delta": _OPT_INT,
    },
}

RESULT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": [
        "version",
        "algorithm",
        "sequence",
        "compressions",
        "starts",
        "lateness",
        "max_lateness",
        "total_cost",
        "feasible",
        "optimal",
        "certificate",
        "xi",
        "trace",
    ],
    "additionalProperties": False,
    "properties": {
        "version": {"const": RESULT_VERSION},
        "algorithm": {"type": "string"},
        "sequence": _ID_LIST,
        "compressions": _INT_MAP,
        "starts": _INT_MAP,
        "lateness": _INT_MAP,
        "max_lateness": _INT,
        "total_cost": _INT,
        "feasible": {"type": "boolean"},
        "optimal": {"type": "boolean"},
        "certificate": {"oneOf": [{"type": "null"}, _KERNEL_SCHEMA]},
        "xi": _OPT_INT,
        "trace": {
            "type": "object",
            "required": ["terminal_reason", "compressed_emerging", "iterations"],
            "additionalProperties": False,
            "properties": {
                "terminal_reason": {"type": ["string", "null"]},
                "compressed_emerging": _ID_LIST,
                "iterations": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["h", "lambda", "delta_min", "L", "cost", "new_kernels", "deltas", "kernels"],
                        "additionalProperties": False,
                        "properties": {
                            "h": _INT,
                            "lambda": _OPT_INT,
                            "delta_min": _OPT_INT,
                            "L": _INT,
                            "cost": _INT,
                            "new_kernels": _INT,
                            "deltas": _INT_MAP,
                            "kernels": {"type": "array", "items": _KERNEL_SCHEMA},
                        },
                    },
                },
            },
        },
    },
}


def _validate(data: Any, schema: dict[str, Any], what: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if error is not None:
        path = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise DocumentError(f"{what} document invalid at {path}: {error.message}")


def _load(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{what} document is not valid JSON: {exc}") from None


def _dump(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def instance_to_dict(instance: Instance) -> dict[str, Any]:
    return {
        "version": INSTANCE_VERSION,
        "budget": instance.budget,
        "jobs": [
            {
                "id": job.id,
                "release": job.release,
                "due": job.due,
                "processing": job.base_processing,
                "unit_cost": job.unit_cost,
            }
            for job in instance.jobs
        ],
    }


def write_instance(instance: Instance) -> str:
    return _dump(instance_to_dict(instance))


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance document.

    Raises:
        DocumentError: on malformed JSON, a schema violation (the message
            names the offending field path) or a semantic problem such as a
            duplicate job id (the message names the job).
    """
    data = _load(text, "instance")
    _validate(data, INSTANCE_SCHEMA, "instance")
    seen: set[str] = set()
    for item in data["jobs"]:
        if item["id"] in seen:
            raise DocumentError(f"duplicate job id {item['id']!r}")
        seen.add(item["id"])
    try:
        jobs = tuple(
            Job(item["id"], item["release"], item["due"], item["processing"], item["unit_cost"])
            for item in data["jobs"]
        )
        return Instance(jobs, data["budget"])
    except ModelError as exc:
        raise DocumentError(str(exc)) from None


def _kernel_dict(kernel: Kernel) -> dict[str, Any]:
    return {
        "jobs": list(kernel.jobs),
        "overflow": kernel.overflow,
        "min_release": kernel.min_release,
        "start": kernel.start,
        "emerging": kernel.delaying_emerging,
        "delta": kernel.delta,
    }


def _trace_dict(trace: RunTrace) -> dict[str, Any]:
    return {
        "terminal_reason": trace.terminal_reason,
        "compressed_emerging": list(trace.compressed_emerging),
        "iterations": [
            {
                "h": it.h,
                "lambda": it.level,
                "delta_min": it.delta_min,
                "L": it.max_lateness,
                "cost": it.cost,
                "new_kernels": it.new_kernels,
                "deltas": dict(sorted(it.deltas.items())),
                "kernels": [_kernel_dict(k) for k in it.kernels],
            }
            for it in trace.iterations
        ],
    }


@dataclass(frozen=True)
class ResultDocument:
    """The serializable view of a solve; ``data`` keeps the canonical key order."""

    data: dict[str, Any]

    @classmethod
    def from_outcome(cls, outcome: SolveOutcome, instance: Instance) -> ResultDocument:
        schedule = outcome.schedule
        lateness, _ = lateness_profile(schedule, instance)
        seq = schedule.sequence
        return cls(
            {
                "version": RESULT_VERSION,
                "algorithm": outcome.algorithm,
                "sequence": list(seq),
                "compressions": {j: schedule.compression[j] for j in seq},
                "starts": {j: schedule.starts[j] for j in seq},
                "lateness": {j: lateness[j] for j in seq},
                "max_lateness": outcome.max_lateness,
                "total_cost": outcome.total_cost,
                "feasible": outcome.feasible,
                "optimal": outcome.optimal,
                "certificate": _kernel_dict(outcome.certificate) if outcome.certificate else None,
                "xi": outcome.xi,
                "trace": _trace_dict(outcome.trace),
            }
        )

    def to_text(self) -> str:
        return _dump(self.data)

    @property
    def sequence(self) -> list[str]:
        return self.data["sequence"]

    @property
    def compressions(self) -> dict[str, int]:
        return self.data["compressions"]

    def check_against(self, instance: Instance) -> list[str]:
        """Re-derive timing from sequence and compressions; list every mismatch."""
        problems = []
        if sorted(self.sequence) != sorted(instance.ids):
            return [f"sequence {self.sequence} is not a permutation of the instance jobs"]
        try:
            schedule = canonical_timing(self.sequence, instance, self.compressions)
        except ModelError as exc:
            return [str(exc)]
        lateness, worst = lateness_profile(schedule, instance)
        for j in self.sequence:
            if schedule.starts[j] != self.data["starts"].get(j):
                problems.append(f"job {j!r}: start {self.data['starts'].get(j)} != {schedule.starts[j]}")
            if lateness[j] != self.data["lateness"].get(j):
                problems.append(f"job {j!r}: lateness {self.data['lateness'].get(j)} != {lateness[j]}")
        if worst != self.data["max_lateness"]:
            problems.append(f"max lateness {self.data['max_lateness']} != {worst}")
        cost = sum(x * instance.job(j).unit_cost for j, x in self.compressions.items())
        if cost != self.data["total_cost"]:
            problems.append(f"total cost {self.data['total_cost']} != {cost}")
        if (cost <= instance.budget) != self.data["feasible"]:
            problems.append("feasible flag disagrees with the budget")
        return problems


def write_result(outcome: SolveOutcome, instance: Instance) -> str:
    return ResultDocument.from_outcome(outcome, instance).to_text()


def parse_result(text: str) -> ResultDocument:
    data = _load(text, "result")
    _validate(data, RESULT_SCHEMA, "result")
    return ResultDocument(data)


def trace_csv(trace: RunTrace) -> str:
    """One row per iteration; absent values are written as empty cells."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for it in trace.iterations:
        writer.writerow(
            [it.h, "" if it.level is None else it.level, "" if it.delta_min is None else it.delta_min,
             it.max_lateness, it.cost]
        )
    return out.getvalue()
