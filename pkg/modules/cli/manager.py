import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from pydantic import ValidationError

from shared.response import (
    EXIT_BUDGET_EXHAUSTED, EXIT_FAILURE, EXIT_INVALID_INPUT, EXIT_OK, HbmException, OutputException
)
from shared.settings import configure_logging, settings
from shared.utils import format_decimal, format_sample, write_csv
from modules.groebner.models import GroebnerBudget
from modules.reference.manager import reference_manager
from modules.reference.models import PeriodResult
from modules.solver.manager import solver_manager
from modules.solver.models import ErrorTableEntry, SolveOutcome, SolveStatus
from .models import FIGURE3_K_VALUES, RunConfig

logger = logging.getLogger(__name__)

PERIOD_DIGITS = 20


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbm",
        description="Harmonic balance approximations of x^(m+1) x'' + x^m = 0"
    )
    parser.add_argument("--log-level", default=settings.log_level, help="diagnostic log level (stderr)")
    commands = parser.add_subparsers(dest="command", required=True)

    def output_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--format", choices=["text", "json", "csv"], default="text")
        sub.add_argument("--out", help="output file (default: stdout)")

    def budget_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--budget-spairs", type=int, help="cap on processed S-pairs")
        sub.add_argument("--budget-bits", type=int, help="cap on total coefficient bits")
        sub.add_argument("--strategy", choices=["auto", "direct", "fglm"], default="auto")

    solve = commands.add_parser("solve", help="solve one (m, N) instance")
    solve.add_argument("--m", type=int, default=0)
    solve.add_argument("--order", type=int, default=1)
    solve.add_argument("--amplitude", default="1")
    solve.add_argument("--digits", type=int, default=settings.digits)
    budget_options(solve)
    output_options(solve)

    table = commands.add_parser("table", help="relative period errors e_N(m)")
    table.add_argument("--max-m", type=int, default=2)
    table.add_argument("--max-order", type=int, default=3)
    table.add_argument("--decimals", type=int, default=settings.table_decimals)
    table.add_argument("--digits", type=int, default=settings.digits)
    table.add_argument("--workers", type=int)
    budget_options(table)
    output_options(table)

    period = commands.add_parser("period", help="reference period of the weak or regularized solution")
    period.add_argument("--amplitude", default="1")
    period.add_argument("--k", action="append", help="regularization parameter (repeatable)")
    period.add_argument("--method", action="append", choices=["exact", "quadrature", "ode"])
    period.add_argument("--digits", type=int, default=PERIOD_DIGITS)
    output_options(period)

    emit = commands.add_parser("emit", help="write CSV samples")
    emit.add_argument("kind", choices=["trajectory", "weaksol", "waveform", "orbit"])
    emit.add_argument("--amplitude", default="1")
    emit.add_argument("--k", action="append", help="regularization parameter (repeatable)")
    emit.add_argument("--k-sweep", choices=["figure3"], help="k in {1, 1/50, 1/1000}")
    emit.add_argument("--t-max", default="20")
    emit.add_argument("--samples", type=int, help="equally spaced trajectory samples instead of accepted steps")
    emit.add_argument("--from", dest="start", default="-8")
    emit.add_argument("--to", dest="stop", default="8")
    emit.add_argument("--step", default="0.01")
    emit.add_argument("--m", type=int, default=0)
    emit.add_argument("--order", type=int, default=2)
    emit.add_argument("--digits", type=int, default=settings.digits)
    budget_options(emit)
    emit.add_argument("--out", required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    raw: Dict[str, Any] = {
        key: value for key, value in vars(args).items()
        if value is not None and key not in ("kind", "k_sweep", "method", "command")
    }
    raw["command"] = args.command
    if args.command == "emit":
        raw["emit_kind"] = args.kind
        k_values: List[Any] = list(args.k or [])
        if args.k_sweep == "figure3":
            k_values.extend(FIGURE3_K_VALUES)
        raw["k"] = k_values
    if args.command == "period":
        raw["methods"] = args.method or ["exact"]
    return RunConfig(**raw)


def budget_from_config(config: RunConfig) -> Optional[GroebnerBudget]:
    if config.budget_spairs is None and config.budget_bits is None:
        return None
    return GroebnerBudget(
        max_spairs=config.budget_spairs or settings.budget_spairs,
        max_coefficient_bits=config.budget_bits or settings.budget_coefficient_bits
    )


# Output helpers

def write_text(text: str, out: Optional[str]) -> None:
    if not out:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    try:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    except OSError as e:
        raise OutputException(out, e.strerror or str(e))
    logger.info(f"Wrote {out}")


def write_rows(header: Sequence[str], rows: Iterable[Sequence[Any]], out: Optional[str]) -> None:
    if out:
        write_csv(out, header, rows)
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def write_json(data: Any, out: Optional[str]) -> None:
    write_text(json.dumps(data, indent=2, sort_keys=False), out)


def k_suffix_path(out: str, k: Fraction) -> str:
    """traj.csv -> traj_k0.02.csv"""
    path = Path(out)
    return str(path.with_name(f"{path.stem}_k{format_decimal(k, 12)}{path.suffix}"))


# Commands

def render_solve_text(outcome: SolveOutcome, digits: int) -> str:
    lines = [f"m = {outcome.m}, N = {outcome.order}", f"status = {outcome.status.value}"]
    if outcome.best is None:
        if outcome.message:
            lines.append(f"message = {outcome.message}")
        for key, value in outcome.stats.items():
            lines.append(f"{key} = {value}")
        return "\n".join(lines)
    best = outcome.best
    lines.extend([
        f"omega = {best.omega.decimal(digits)}",
        f"C_N = {best.period_coefficient.decimal(digits)}",
        f"residual = {best.residual.decimal(digits)}",
        f"univariate degree = {best.univariate_degree}",
        f"positive roots = {outcome.positive_roots}",
        f"candidates = {len(outcome.candidates)}"
    ])
    for name, value in zip(best.variables, best.coefficients):
        lines.append(f"{name} = {value.decimal(digits)}")
    if len(outcome.candidates) > 1:
        lines.append("other candidates (omega, residual):")
        for candidate in outcome.candidates:
            if candidate is best:
                continue
            lines.append(f"  {candidate.omega.decimal(12)}  {candidate.residual.decimal(12)}")
    return "\n".join(lines)


def cmd_hbm_solve(config: RunConfig) -> int:
    outcome = solver_manager.solve_hbm(
        config.m, config.order, digits=config.digits, budget=budget_from_config(config),
        amplitude=config.amplitude, strategy=config.strategy
    )
    if config.format == "json":
        write_json(outcome.to_dict(config.digits), config.out)
    elif config.format == "csv":
        rows = []
        if outcome.best is not None:
            best = outcome.best
            named = [("omega", best.omega.interval)] + list(zip(best.variables, best.coefficients))
            named += [("C_N", best.period_coefficient), ("residual", best.residual)]
            rows = [[name, value.decimal(config.digits), str(value.lo), str(value.hi)] for name, value in named]
        write_rows(["name", "decimal", "lo", "hi"], rows, config.out)
    else:
        write_text(render_solve_text(outcome, config.digits), config.out)

    if outcome.status == SolveStatus.BUDGET_EXHAUSTED:
        return EXIT_BUDGET_EXHAUSTED
    if outcome.status == SolveStatus.NO_ADMISSIBLE_SOLUTION:
        return EXIT_FAILURE
    return EXIT_OK


def render_table_text(entries: List[ErrorTableEntry], decimals: int) -> str:
    """Rows N, columns m; '-' for cells without a certified value"""
    if not entries:
        return ""
    ms = sorted({e.m for e in entries})
    orders = sorted({e.order for e in entries})
    cells = {(e.m, e.order): e.row(decimals)[3] for e in entries}
    width = max(8, decimals + 5)
    lines = ["N".ljust(4) + "".join(f"m={m}".rjust(width) for m in ms)]
    for n in orders:
        lines.append(str(n).ljust(4) + "".join(cells.get((m, n), "-").rjust(width) for m in ms))
    return "\n".join(lines)


def cmd_table(config: RunConfig) -> int:
    entries = solver_manager.error_table(
        config.max_m, config.max_order, budget=budget_from_config(config),
        workers=config.workers, digits=config.digits, strategy=config.strategy
    )
    if config.format == "json":
        write_json([e.to_dict(config.decimals) for e in entries], config.out)
    elif config.format == "csv":
        write_rows(["m", "N", "C_N", "error_percent"], [e.row(config.decimals) for e in entries], config.out)
    else:
        write_text(render_table_text(entries, config.decimals), config.out)
    return EXIT_OK


def period_results(config: RunConfig) -> List[PeriodResult]:
    results = []
    for method in config.methods:
        if method == "exact":
            results.append(reference_manager.exact_period(config.amplitude))
            continue
        for k in config.k:
            if method == "quadrature":
                results.append(reference_manager.regularized_period_quadrature(config.amplitude, k))
            else:
                results.append(reference_manager.regularized_period_ode(config.amplitude, k))
    return results


def cmd_period(config: RunConfig) -> int:
    results = period_results(config)
    if config.format == "json":
        write_json([r.to_dict(config.digits) for r in results], config.out)
    elif config.format == "csv":
        write_rows(
            ["method", "amplitude", "k", "value", "estimated_error"],
            [
                [r.method.value, format_sample(r.amplitude), "" if r.k is None else format_sample(r.k),
                 r.decimal(config.digits), format_sample(r.estimated_error)]
                for r in results
            ],
            config.out
        )
    else:
        lines = []
        for r in results:
            k_text = "" if r.k is None else f", k={format_sample(r.k)}"
            lines.append(f"{r.method.value}: T = {r.decimal(config.digits)} (A={format_sample(r.amplitude)}{k_text})")
        write_text("\n".join(lines), config.out)
    return EXIT_OK


def cmd_emit(config: RunConfig) -> int:
    kind = config.emit_kind
    if kind == "trajectory":
        targets = [(k, config.out if len(config.k) == 1 else k_suffix_path(config.out, k)) for k in config.k]
        for k, path in targets:
            trajectory = reference_manager.simulate_regularized(
                config.amplitude, k, config.t_max, samples=config.samples
            )
            write_csv(
                path, ["t", "x", "y"],
                ([format_sample(t), format_sample(x), format_sample(y)]
                 for t, x, y in zip(trajectory.t, trajectory.x, trajectory.y))
            )
        return EXIT_OK

    if kind == "weaksol":
        write_csv(
            config.out, ["t", "x"],
            ([format_sample(t), format_sample(reference_manager.weak_solution(t, config.amplitude))]
             for t in config.grid())
        )
        return EXIT_OK

    if kind == "orbit":
        ys = config.grid()
        xs = reference_manager.singular_orbit([float(y) for y in ys], config.amplitude)
        write_csv(config.out, ["y", "x"], ([format_sample(y), format_sample(x)] for y, x in zip(ys, xs)))
        return EXIT_OK

    outcome = solver_manager.solve_hbm(
        config.m, config.order, digits=config.digits, budget=budget_from_config(config),
        strategy=config.strategy
    )
    if not outcome.solved:
        logger.error(f"m={config.m}, N={config.order}: {outcome.status.value}")
        return EXIT_BUDGET_EXHAUSTED if outcome.status == SolveStatus.BUDGET_EXHAUSTED else EXIT_FAILURE
    times = config.grid()
    approximation = solver_manager.sample_waveform(outcome.best, config.amplitude, [float(t) for t in times])
    write_csv(
        config.out, ["t", "x_hbm", "x_weak"],
        ([format_sample(t), format_sample(x), format_sample(reference_manager.weak_solution(t, config.amplitude))]
         for t, x in zip(times, approximation))
    )
    return EXIT_OK


COMMANDS = {
    "solve": cmd_hbm_solve,
    "table": cmd_table,
    "period": cmd_period,
    "emit": cmd_emit
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, handlers=[logging.StreamHandler(sys.stderr)])
    try:
        config = config_from_args(args)
    except ValidationError as e:
        for error in e.errors():
            sys.stderr.write(f"invalid input: {error['msg']}\n")
        return EXIT_INVALID_INPUT

    try:
        return COMMANDS[config.command](config)
    except HbmException as e:
        logger.error(f"{config.command} failed: {e.message}")
        sys.stderr.write(f"error: {e.message}\n")
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error in {config.command}: {str(e)}", exc_info=True)
        return EXIT_FAILURE
