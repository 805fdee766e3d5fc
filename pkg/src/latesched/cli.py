"""Command line interface.

Exit codes: 0 success, 1 usage or input error, 2 infeasible result or oracle
size limit, 3 invariant violation found by ``verify``.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from .algorithms import SOLVERS, SolveOutcome
from .documents import DocumentError, parse_instance, trace_csv, write_instance, write_result
from .ed import initial_schedule
from .generate import BudgetPolicy, gen_instance
from .kernels import extract_kernels
from .model import Instance, blocks_and_gaps, lateness_profile
from .oracle import OracleLimitError, best_sequence, oracle_compressible
from .verify import run_verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VIOLATION = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _policy(text: str) -> BudgetPolicy:
    try:
        return BudgetPolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="latesched", description="Maximum lateness with compressible jobs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="solve an instance document")
    solve.add_argument("--alg", choices=sorted(SOLVERS), required=True)
    solve.add_argument("--input", type=Path, required=True)
    solve.add_argument("--output", type=Path, help="result document path (default: stdout)")
    solve.add_argument("--trace", action="store_true", help="print the iteration trace to stderr")
    solve.add_argument("--csv", type=Path, help="write the iteration trace as CSV")

    analyze = sub.add_parser("analyze", help="blocks, gaps and kernels of the initial ED schedule")
    analyze.add_argument("--input", type=Path, required=True)

    gen = sub.add_parser("gen", help="generate a random instance document")
    _generator_flags(gen)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--output", type=Path, help="instance document path (default: stdout)")

    verify = sub.add_parser("verify", help="batch-check solver claims on generated instances")
    verify.add_argument("--alg", choices=["2", "3"], required=True)
    verify.add_argument("--trials", type=int, required=True)
    verify.add_argument("--seed", type=int, required=True)
    verify.add_argument("--n", type=int, required=True)
    _generator_flags(verify, max_processing=3, horizon=10, cost_max=2)
    verify.add_argument("--jobs", type=int, default=1, help="worker processes")

    oracle = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    oracle.add_argument("--input", type=Path, required=True)
    oracle.add_argument(
        "--mode",
        choices=["generic", "compressible"],
        default="generic",
        help="generic: fixed processing times; compressible: also search compressions",
    )
    return parser


def _generator_flags(
    parser: argparse.ArgumentParser, max_processing: int = 6, horizon: int = 20, cost_max: int = 3
) -> None:
    parser.add_argument("--max-processing", type=int, default=max_processing)
    parser.add_argument("--horizon", type=int, default=horizon)
    parser.add_argument("--cost-max", type=int, default=cost_max)
    parser.add_argument(
        "--budget", type=_policy, default=BudgetPolicy("unbounded"), help="zero, unbounded or fraction:F"
    )


def _read_instance(path: Path) -> Instance:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_instance(text)
    except DocumentError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _print_trace(outcome: SolveOutcome) -> None:
    for it in outcome.trace.iterations:
        kernels = "; ".join(
            f"{{{','.join(k.jobs)}}} e={k.delaying_emerging or '-'}" for k in it.kernels
        )
        print(
            f"h={it.h} lambda={it.level} delta_min={it.delta_min} L={it.max_lateness} "
            f"cost={it.cost} kernels: {kernels}",
            file=sys.stderr,
        )
    print(f"terminal: {outcome.trace.terminal_reason}", file=sys.stderr)


def _solve(args: argparse.Namespace) -> int:
    instance = _read_instance(args.input)
    outcome = SOLVERS[args.alg](instance)
    _emit(write_result(outcome, instance), args.output)
    if args.csv:
        args.csv.write_text(trace_csv(outcome.trace), encoding="utf-8")
    if args.trace:
        _print_trace(outcome)
    if not outcome.feasible:
        print(f"result exceeds the budget: cost {outcome.total_cost} > {instance.budget}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _analyze(args: argparse.Namespace) -> int:
    instance = _read_instance(args.input)
    sigma = initial_schedule(instance)
    lateness, worst = lateness_profile(sigma, instance)
    print("schedule:")
    for j in sigma.sequence:
        print(f"  {j}: [{sigma.starts[j]}, {sigma.completions[j]}) lateness {lateness[j]}")
    print(f"max lateness: {worst}")
    partition = blocks_and_gaps(sigma, instance)
    print("blocks:")
    for lo, hi in partition.blocks:
        print(f"  [{', '.join(sigma.sequence[lo:hi])}]")
    print("gaps:")
    for start, end in partition.gaps:
        print(f"  ({start}, {end})")
    print("kernels:")
    for k in extract_kernels(sigma, instance):
        e = k.delaying_emerging or "none"
        delta = "none" if k.delta is None else k.delta
        print(f"  {{{', '.join(k.jobs)}}} overflow {k.overflow} r(K)={k.min_release} e={e} delta={delta}")
    return EXIT_OK


def _gen(args: argparse.Namespace) -> int:
    try:
        instance = gen_instance(
            args.n, args.seed, args.max_processing, args.horizon, args.cost_max, args.budget
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(write_instance(instance), args.output)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    if args.trials < 1 or args.n < 1 or args.jobs < 1:
        raise UsageError("--trials, --n and --jobs must be positive")
    report = run_verify(
        args.alg,
        args.trials,
        args.seed,
        args.n,
        args.max_processing,
        args.horizon,
        args.cost_max,
        str(args.budget),
        args.jobs,
    )
    for violation in report.violations:
        print(violation)
    bad = len({v.trial for v in report.violations})
    print(
        f"algorithm {args.alg}: {args.trials - bad}/{args.trials} trials passed, "
        f"{len(report.violations)} violations, {report.skipped_oracle} oracle checks skipped"
    )
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _oracle(args: argparse.Namespace) -> int:
    instance = _read_instance(args.input)
    if args.mode == "generic":
        value, sequence = best_sequence(instance)
        report = {"mode": "generic", "max_lateness": value, "sequence": list(sequence)}
    else:
        value, x = oracle_compressible(instance)
        report = {"mode": "compressible", "max_lateness": value, "compressions": x}
    print(json.dumps(report, indent=2))
    return EXIT_OK


COMMANDS = {
    "solve": _solve,
    "analyze": _analyze,
    "gen": _gen,
    "verify": _verify,
    "oracle": _oracle,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"latesched: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleLimitError as exc:
        print(f"latesched: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def main() -> None:
    sys.exit(run_cli())
