"""Scalar chain against its Fokker-Planck density."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.limits import (
    DEFAULT_BETA,
    DEFAULT_FP_DT,
    DEFAULT_FP_GRID,
    DEFAULT_FP_SAMPLES,
    DEFAULT_FP_TIMES,
    DEFAULT_FP_U0,
    DEFAULT_SEED,
    MIN_CHAIN_SAMPLES,
)
from scalespace_lab.core.paths import DEFAULT_FP_COMPARE_OUTPUT
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import CommandResult
from scalespace_lab.experiments.common import run_command, write_metric_log
from scalespace_lab.fileio.metrics import MetricLog
from scalespace_lab.fokker_planck.compare import ChainComparison, chain_vs_pde_compare
from scalespace_lab.fokker_planck.grid import GridSpec
from scalespace_lab.probdiff.entropy import validate_schedule
from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)

COMMAND = "fp-compare"


@dataclass(frozen=True, slots=True)
class FpCompareConfig:
    """Configuration of a chain/PDE comparison.

    Attributes:
        output_path: CSV file of per-step comparisons
        beta: Constant step variance
        u0: Common start value of all chains
        samples: Number of chains
        grid: ``(lo, hi, cells)`` of the density grid
        times: Steps at which chain and PDE are compared
        seed: Seed of the chain noise
        dt: PDE time step
        theta: PDE time-stepping weight, 1 implicit Euler and 0.5 Crank-Nicolson
        excel: Also write the metric log as a workbook
    """

    output_path: Path = DEFAULT_FP_COMPARE_OUTPUT
    beta: float = DEFAULT_BETA
    u0: float = DEFAULT_FP_U0
    samples: int = DEFAULT_FP_SAMPLES
    grid: tuple[float, float, int] = DEFAULT_FP_GRID
    times: tuple[int, ...] = DEFAULT_FP_TIMES
    seed: int = DEFAULT_SEED
    dt: float = DEFAULT_FP_DT
    theta: float = 1.0
    excel: bool = False


def comparison_log(result: ChainComparison) -> MetricLog:
    """Return one metric row per compared step, with the exact chain moments."""
    log = MetricLog()
    retain = 1.0 - result.beta
    for entry in result.times:
        log.append(
            entry.step,
            {
                "l1_distance": entry.l1_distance,
                "sample_mean": entry.sample_mean,
                "exact_mean": result.u0 * retain ** (0.5 * entry.step),
                "sample_variance": entry.sample_variance,
                "exact_variance": 1.0 - retain**entry.step,
                "sample_skewness": entry.sample_skewness,
                "skewness_stderr": entry.skewness_stderr,
                "outside_count": entry.outside_count,
                "boundary_mass": entry.boundary_mass,
            },
        )
    return log


def _run(config: FpCompareConfig) -> list[Path]:
    if config.samples < MIN_CHAIN_SAMPLES:
        raise DomainError(
            f"--samples must be at least {MIN_CHAIN_SAMPLES}, got {config.samples}"
        )
    if not config.times:
        raise DomainError("At least one comparison step is required")
    schedule = NoiseSchedule.constant(config.beta, max(config.times))
    entry = validate_schedule(schedule.slice(0, 1), 1)[0]
    LOG.info(
        "Admissibility for n=1: beta=%g %s (margin %.6g)",
        config.beta,
        "admissible" if entry.admissible else "not admissible",
        entry.margin,
    )
    result = chain_vs_pde_compare(
        config.u0,
        schedule,
        config.samples,
        GridSpec(*config.grid),
        config.times,
        rng=RngStream(config.seed),
        dt=config.dt,
        theta=config.theta,
    )
    LOG.info("Largest L1 distance: %.5f", result.max_l1)
    return write_metric_log(comparison_log(result), config.output_path, excel=config.excel)


def run_fp_compare(config: FpCompareConfig) -> CommandResult:
    """Compare chain histograms with the PDE density and write the distances.

    Args:
        config: Comparison configuration

    Returns:
        Result listing the written metric files
    """
    return run_command(COMMAND, lambda: _run(config))
