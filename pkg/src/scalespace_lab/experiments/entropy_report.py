"""Closed-form entropy sequences of a noise schedule."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from scalespace_lab.core.limits import DEFAULT_ENTROPY_DIMENSION
from scalespace_lab.core.paths import DEFAULT_ENTROPY_REPORT_OUTPUT
from scalespace_lab.core.types import CommandResult
from scalespace_lab.experiments.common import ScheduleConfig, run_command, write_metric_log
from scalespace_lab.experiments.probdiff import entropy_row
from scalespace_lab.fileio.metrics import MetricLog
from scalespace_lab.probdiff.entropy import Trend, sequence_trend, validate_schedule
from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)

COMMAND = "entropy-report"


@dataclass(frozen=True, slots=True)
class EntropyReportConfig:
    """Configuration of an entropy report.

    Attributes:
        output_path: CSV file of per-step values
        schedule: Noise schedule
        n: Number of pixel values per image
        excel: Also write the metric log as a workbook
    """

    output_path: Path = DEFAULT_ENTROPY_REPORT_OUTPUT
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    n: int = DEFAULT_ENTROPY_DIMENSION
    excel: bool = False


def entropy_report(schedule: NoiseSchedule, n: int) -> MetricLog:
    """Return per-step betas, entropy increments, admissibility and conditional entropies."""
    admissibility = validate_schedule(schedule, n)
    log = MetricLog()
    for step in range(1, len(schedule) + 1):
        log.append(step, entropy_row(schedule, step, n, admissibility[step - 1]))
    return log


def _run(config: EntropyReportConfig) -> list[Path]:
    schedule = config.schedule.build()
    log = entropy_report(schedule, config.n)
    if len(log):
        deficits = log.column("conditional_entropy_deficit")
        trend = sequence_trend([float(value) for value in deficits if value is not None])
        negative = sum(1 for value in log.column("admissible") if value == 0)
        LOG.info(
            "Conditional entropy deficit is %s over %d steps; %d negative increments",
            trend,
            len(log),
            negative,
        )
        if trend not in (Trend.NONINCREASING, Trend.CONSTANT):
            LOG.warning("Conditional entropy deficit is not monotone (%s)", trend)
    return write_metric_log(log, config.output_path, excel=config.excel)


def run_entropy_report(config: EntropyReportConfig) -> CommandResult:
    """Evaluate the entropy sequences of a schedule and write them as CSV.

    Args:
        config: Report configuration

    Returns:
        Result listing the written metric files
    """
    return run_command(COMMAND, lambda: _run(config))
