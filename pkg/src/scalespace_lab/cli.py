"""Command-line interface for the scale-space laboratory."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from scalespace_lab import __version__
from scalespace_lab.core.limits import (
    DEFAULT_BETA,
    DEFAULT_ENTROPY_DIMENSION,
    DEFAULT_FP_DT,
    DEFAULT_FP_GRID,
    DEFAULT_FP_SAMPLES,
    DEFAULT_FP_TIMES,
    DEFAULT_FP_U0,
    DEFAULT_GRID_SPACING,
    DEFAULT_GUIDANCE,
    DEFAULT_INPUT,
    DEFAULT_MAXVAL,
    DEFAULT_RECORD_STEPS,
    DEFAULT_SEED,
    DEFAULT_SOLVER_MAX_ITER,
    DEFAULT_SOLVER_TOL,
    DEFAULT_STEPS,
    DEFAULT_TAU,
)
from scalespace_lab.core.paths import (
    DEFAULT_ENTROPY_REPORT_OUTPUT,
    DEFAULT_FP_COMPARE_OUTPUT,
    DEFAULT_OSMOSIS_OUTDIR,
    DEFAULT_PROBDIFF_OUTDIR,
)
from scalespace_lab.experiments.common import (
    DEFAULT_BETA_END,
    DEFAULT_BETA_START,
    ScheduleConfig,
    ScheduleKind,
)
from scalespace_lab.experiments.entropy_report import EntropyReportConfig, run_entropy_report
from scalespace_lab.experiments.fp_compare import FpCompareConfig, run_fp_compare
from scalespace_lab.experiments.osmosis import OsmosisRunConfig, run_osmosis
from scalespace_lab.experiments.probdiff import ProbdiffRunConfig, run_probdiff
from scalespace_lab.fileio.pnm import MAX_MAXVAL

if TYPE_CHECKING:
    from collections.abc import Sequence

    from scalespace_lab.core.types import CommandResult

LOG = logging.getLogger("scalespace_lab")


def _non_negative_int(value: str) -> int:
    """Parse a non-negative integer command-line option."""
    try:
        parsed = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("must be a non-negative integer") from exc
    if parsed < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return parsed


def _positive_int(value: str) -> int:
    """Parse a count that must be at least 1."""
    try:
        parsed = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("must be a positive integer") from exc
    if parsed < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return parsed


def _maxval(value: str) -> int:
    """Parse a PNM maxval."""
    message = f"must be an integer in 1..{MAX_MAXVAL}"
    try:
        parsed = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(message) from exc
    if not 0 < parsed <= MAX_MAXVAL:
        raise argparse.ArgumentTypeError(message)
    return parsed


def _positive_float(value: str) -> float:
    """Parse a strictly positive real option."""
    try:
        parsed = float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("must be a positive number") from exc
    if not parsed > 0.0:
        raise argparse.ArgumentTypeError("must be a positive number")
    return parsed


def _unit_interval(value: str) -> float:
    """Parse a beta strictly inside (0, 1)."""
    try:
        parsed = float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("must be a number strictly inside (0, 1)") from exc
    if not 0.0 < parsed < 1.0:
        raise argparse.ArgumentTypeError("must be a number strictly inside (0, 1)")
    return parsed


def _step_list(value: str) -> tuple[int, ...]:
    """Parse a comma-separated list of non-negative step counts."""
    try:
        steps = tuple(_non_negative_int(part.strip()) for part in value.split(",") if part.strip())
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(
            "must be comma-separated non-negative integers"
        ) from exc
    if not steps:
        raise argparse.ArgumentTypeError("must list at least one step")
    return steps


def _grid(value: str) -> tuple[float, float, int]:
    """Parse ``LO,HI,CELLS``."""
    parts = value.split(",")
    try:
        lo, hi, cells = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError) as exc:
        raise argparse.ArgumentTypeError("must be LO,HI,CELLS") from exc
    if len(parts) != 3 or not hi > lo or cells < 2:
        raise argparse.ArgumentTypeError("must be LO,HI,CELLS with LO < HI and CELLS >= 2")
    return lo, hi, cells


def _format_steps(steps: Sequence[int]) -> str:
    return ",".join(str(step) for step in steps)


class JsonFormatter(logging.Formatter):
    """Structured JSON log formatter."""

    def format(self, record: logging.LogRecord) -> str:
        """Format a log record as a JSON object.

        Args:
            record: Log record to format

        Returns:
            JSON string with timestamp, level, logger, message, and optional
            exception fields
        """
        payload = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload)


def configure_logging(level: str, log_format: str = "text") -> None:
    """Configure logging with the specified level and format.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_format: Output format: "text" for human-readable, "json" for structured
    """
    handler = logging.StreamHandler()
    formatters = {
        "json": JsonFormatter(),
        "text": logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"),
    }
    handler.setFormatter(formatters.get(log_format, formatters["text"]))
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        handlers=[handler],
    )


def _add_schedule_args(parser: argparse.ArgumentParser) -> None:
    """Add the options that select a noise schedule."""
    parser.add_argument(
        "--schedule-kind",
        type=ScheduleKind,
        choices=list(ScheduleKind),
        default=ScheduleKind.CONSTANT,
        help="Schedule family (default: constant)",
    )
    parser.add_argument(
        "--beta",
        type=_unit_interval,
        default=DEFAULT_BETA,
        help=f"Step variance of the constant schedule (default: {DEFAULT_BETA})",
    )
    parser.add_argument(
        "--beta-start",
        type=_unit_interval,
        default=DEFAULT_BETA_START,
        help=f"First beta of linear/quadratic schedules (default: {DEFAULT_BETA_START})",
    )
    parser.add_argument(
        "--beta-end",
        type=_unit_interval,
        default=DEFAULT_BETA_END,
        help=f"Last beta of linear/quadratic schedules (default: {DEFAULT_BETA_END})",
    )
    parser.add_argument(
        "--schedule",
        type=Path,
        default=None,
        help="Schedule file with one beta per line; overrides the options above",
    )
    parser.add_argument(
        "--steps",
        type=_positive_int,
        default=DEFAULT_STEPS,
        help=f"Number of steps of a named schedule (default: {DEFAULT_STEPS})",
    )


def _schedule_config(args: argparse.Namespace) -> ScheduleConfig:
    return ScheduleConfig(
        kind=args.schedule_kind,
        steps=args.steps,
        beta=args.beta,
        beta_start=args.beta_start,
        beta_end=args.beta_end,
        path=args.schedule,
    )


def _add_excel_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--excel",
        action="store_true",
        help="Also write each metric log as a formatted .xlsx workbook",
    )


def _build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all subcommands.

    Returns:
        Configured argument parser with all supported subcommands
    """
    parser = argparse.ArgumentParser(
        prog="scalespace-lab",
        description="Probabilistic diffusion and osmosis as scale-spaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Noise the built-in scene with beta = 0.02 and write the standard frames
    scalespace-lab probdiff --beta 0.02

    # Osmosis toward noise guidance with tau = 1
    scalespace-lab osmosis --input photo.ppm --guidance noise:42 --tau 1

    # Chain histograms against the Fokker-Planck density
    scalespace-lab fp-compare --beta 0.02 --u0 1 --samples 100000

    # Entropy sequences of a schedule file
    scalespace-lab entropy-report --schedule betas.txt --n 12288
        """,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level (default: INFO)",
    )
    parser.add_argument(
        "--log-format",
        default="text",
        choices=["text", "json"],
        help="Log output format (default: text)",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    probdiff = subparsers.add_parser("probdiff", help="Forward-noise an image")
    probdiff.add_argument(
        "--input",
        default=DEFAULT_INPUT,
        help=f"PNM image or synthetic:WxH[xC] (default: {DEFAULT_INPUT})",
    )
    _add_schedule_args(probdiff)
    probdiff.add_argument(
        "--record",
        type=_step_list,
        default=DEFAULT_RECORD_STEPS,
        help=f"Steps to write as frames (default: {_format_steps(DEFAULT_RECORD_STEPS)})",
    )
    probdiff.add_argument(
        "--seed",
        type=_non_negative_int,
        default=DEFAULT_SEED,
        help=f"Noise seed (default: {DEFAULT_SEED})",
    )
    probdiff.add_argument(
        "--outdir",
        type=Path,
        default=DEFAULT_PROBDIFF_OUTDIR,
        help=f"Output directory (default: {DEFAULT_PROBDIFF_OUTDIR})",
    )
    probdiff.add_argument(
        "--maxval",
        type=_maxval,
        default=DEFAULT_MAXVAL,
        help=f"Maxval of noise-range frames (default: {DEFAULT_MAXVAL})",
    )
    _add_excel_arg(probdiff)

    osmosis = subparsers.add_parser("osmosis", help="Osmosis filtering toward a guidance image")
    osmosis.add_argument(
        "--input",
        default=DEFAULT_INPUT,
        help=f"PNM image or synthetic:WxH[xC] (default: {DEFAULT_INPUT})",
    )
    osmosis.add_argument(
        "--guidance",
        default=DEFAULT_GUIDANCE,
        help=f"Guidance image path or noise:SEED (default: {DEFAULT_GUIDANCE})",
    )
    osmosis.add_argument(
        "--tau",
        type=_positive_float,
        default=DEFAULT_TAU,
        help=f"Implicit time step (default: {DEFAULT_TAU})",
    )
    osmosis.add_argument(
        "--record",
        type=_step_list,
        default=DEFAULT_RECORD_STEPS,
        help=f"Steps to write as frames (default: {_format_steps(DEFAULT_RECORD_STEPS)})",
    )
    osmosis.add_argument(
        "--outdir",
        type=Path,
        default=DEFAULT_OSMOSIS_OUTDIR,
        help=f"Output directory (default: {DEFAULT_OSMOSIS_OUTDIR})",
    )
    osmosis.add_argument(
        "--grid-spacing",
        type=_positive_float,
        default=DEFAULT_GRID_SPACING,
        help=f"Grid spacing h (default: {DEFAULT_GRID_SPACING})",
    )
    osmosis.add_argument(
        "--tol",
        type=_positive_float,
        default=DEFAULT_SOLVER_TOL,
        help=f"Relative residual tolerance (default: {DEFAULT_SOLVER_TOL})",
    )
    osmosis.add_argument(
        "--max-iter",
        type=_positive_int,
        default=DEFAULT_SOLVER_MAX_ITER,
        help=f"Iteration limit per solve (default: {DEFAULT_SOLVER_MAX_ITER})",
    )
    _add_excel_arg(osmosis)

    fp_compare = subparsers.add_parser(
        "fp-compare",
        help="Compare scalar chains with the Fokker-Planck density",
    )
    fp_compare.add_argument(
        "--beta",
        type=_unit_interval,
        default=DEFAULT_BETA,
        help=f"Constant step variance (default: {DEFAULT_BETA})",
    )
    fp_compare.add_argument(
        "--u0",
        type=float,
        default=DEFAULT_FP_U0,
        help=f"Start value of every chain (default: {DEFAULT_FP_U0})",
    )
    fp_compare.add_argument(
        "--samples",
        type=_positive_int,
        default=DEFAULT_FP_SAMPLES,
        help=f"Number of chains, at least 1000 (default: {DEFAULT_FP_SAMPLES})",
    )
    fp_compare.add_argument(
        "--grid",
        type=_grid,
        default=DEFAULT_FP_GRID,
        help="Density grid LO,HI,CELLS (default: {},{},{})".format(*DEFAULT_FP_GRID),
    )
    fp_compare.add_argument(
        "--times",
        type=_step_list,
        default=DEFAULT_FP_TIMES,
        help=f"Steps to compare (default: {_format_steps(DEFAULT_FP_TIMES)})",
    )
    fp_compare.add_argument(
        "--seed",
        type=_non_negative_int,
        default=DEFAULT_SEED,
        help=f"Chain noise seed (default: {DEFAULT_SEED})",
    )
    fp_compare.add_argument(
        "--dt",
        type=_positive_float,
        default=DEFAULT_FP_DT,
        help=f"PDE time step (default: {DEFAULT_FP_DT})",
    )
    fp_compare.add_argument(
        "--theta",
        type=float,
        default=1.0,
        help="PDE time weight: 1 implicit Euler, 0.5 Crank-Nicolson (default: 1.0)",
    )
    fp_compare.add_argument(
        "--output",
        type=Path,
        default=DEFAULT_FP_COMPARE_OUTPUT,
        help=f"Output CSV (default: {DEFAULT_FP_COMPARE_OUTPUT})",
    )
    _add_excel_arg(fp_compare)

    entropy = subparsers.add_parser(
        "entropy-report",
        help="Closed-form entropy sequences of a schedule",
    )
    _add_schedule_args(entropy)
    entropy.add_argument(
        "--n",
        type=_positive_int,
        default=DEFAULT_ENTROPY_DIMENSION,
        help=f"Pixel values per image (default: {DEFAULT_ENTROPY_DIMENSION})",
    )
    entropy.add_argument(
        "--output",
        type=Path,
        default=DEFAULT_ENTROPY_REPORT_OUTPUT,
        help=f"Output CSV (default: {DEFAULT_ENTROPY_REPORT_OUTPUT})",
    )
    _add_excel_arg(entropy)

    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse command-line arguments.

    Args:
        argv: Command-line arguments (defaults to sys.argv[1:])

    Returns:
        Parsed arguments namespace.
    """
    return _build_parser().parse_args(argv)


def run_probdiff_command(args: argparse.Namespace) -> int:
    """Run the forward-noising experiment."""
    config = ProbdiffRunConfig(
        input_spec=args.input,
        outdir=args.outdir,
        schedule=_schedule_config(args),
        record_steps=args.record,
        seed=args.seed,
        maxval=args.maxval,
        excel=args.excel,
    )
    return _handle_result(run_probdiff(config))


def run_osmosis_command(args: argparse.Namespace) -> int:
    """Run the osmosis experiment."""
    config = OsmosisRunConfig(
        input_spec=args.input,
        guidance=args.guidance,
        outdir=args.outdir,
        tau=args.tau,
        record_steps=args.record,
        h=args.grid_spacing,
        tol=args.tol,
        max_iter=args.max_iter,
        excel=args.excel,
    )
    return _handle_result(run_osmosis(config))


def run_fp_compare_command(args: argparse.Namespace) -> int:
    """Run the chain/PDE comparison."""
    config = FpCompareConfig(
        output_path=args.output,
        beta=args.beta,
        u0=args.u0,
        samples=args.samples,
        grid=args.grid,
        times=args.times,
        seed=args.seed,
        dt=args.dt,
        theta=args.theta,
        excel=args.excel,
    )
    return _handle_result(run_fp_compare(config))


def run_entropy_report_command(args: argparse.Namespace) -> int:
    """Run the entropy report."""
    config = EntropyReportConfig(
        output_path=args.output,
        schedule=_schedule_config(args),
        n=args.n,
        excel=args.excel,
    )
    return _handle_result(run_entropy_report(config))


def _handle_result(result: CommandResult) -> int:
    """Handle a command result and return appropriate exit code.

    Args:
        result: Command result to handle

    Returns:
        Exit code (0 for success, 1 for failure)
    """
    if not result.success:
        LOG.error(str(result))
        return 1

    LOG.info(str(result))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the CLI.

    Args:
        argv: Command-line arguments (defaults to sys.argv[1:])

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    parser = _build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_format)

    if args.command is None:
        parser.print_help()
        return 0

    command_handlers = {
        "probdiff": run_probdiff_command,
        "osmosis": run_osmosis_command,
        "fp-compare": run_fp_compare_command,
        "entropy-report": run_entropy_report_command,
    }

    handler = command_handlers.get(args.command)
    if handler is None:
        LOG.error("Unknown command: %s", args.command)
        return 1

    try:
        return handler(args)
    except KeyboardInterrupt:
        LOG.error("Interrupted by user")
        return 130
    except Exception:
        LOG.exception("Unexpected error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
