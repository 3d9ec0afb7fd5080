"""Shared pieces of the experiment runners."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.limits import DEFAULT_BETA, DEFAULT_STEPS
from scalespace_lab.core.types import CommandResult
from scalespace_lab.probdiff.schedule import NoiseSchedule

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence
    from pathlib import Path

    from scalespace_lab.fileio.metrics import MetricLog

LOG = logging.getLogger(__name__)

DEFAULT_BETA_START = 1e-4
DEFAULT_BETA_END = 2e-2


class ScheduleKind(StrEnum):
    """Named schedule families selectable on the command line."""

    CONSTANT = "constant"
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    COSINE = "cosine"


@dataclass(frozen=True, slots=True)
class ScheduleConfig:
    """How to build a noise schedule.

    Attributes:
        kind: Schedule family, ignored when ``path`` is set
        steps: Number of steps
        beta: Step variance of the constant family
        beta_start: First beta of the linear and quadratic families
        beta_end: Last beta of the linear and quadratic families
        path: Optional schedule file with one beta per line
    """

    kind: ScheduleKind = ScheduleKind.CONSTANT
    steps: int = DEFAULT_STEPS
    beta: float = DEFAULT_BETA
    beta_start: float = DEFAULT_BETA_START
    beta_end: float = DEFAULT_BETA_END
    path: Path | None = None

    def build(self) -> NoiseSchedule:
        """Return the configured schedule.

        A schedule file is used as written; ``steps`` only applies to the
        named families.

        Raises:
            DomainError: If a beta is not strictly inside (0, 1) or steps is negative
            ScheduleFormatError: If the schedule file is malformed
        """
        if self.path is not None:
            schedule = NoiseSchedule.from_file(self.path)
            LOG.info("Loaded %d-step schedule from %s", len(schedule), self.path)
            return schedule
        if self.kind is ScheduleKind.LINEAR:
            return NoiseSchedule.linear(self.steps, self.beta_start, self.beta_end)
        if self.kind is ScheduleKind.QUADRATIC:
            return NoiseSchedule.quadratic(self.steps, self.beta_start, self.beta_end)
        if self.kind is ScheduleKind.COSINE:
            return NoiseSchedule.cosine(self.steps)
        return NoiseSchedule.constant(self.beta, self.steps)


def select_record_steps(record_steps: Iterable[int], last: int | None = None) -> tuple[int, ...]:
    """Return sorted unique record steps with 0 included.

    Steps beyond ``last`` are dropped with a warning.

    Raises:
        DomainError: If a record step is negative
    """
    steps = sorted({0, *record_steps})
    if steps[0] < 0:
        raise DomainError("Record steps must be non-negative")
    if last is not None and steps[-1] > last:
        dropped = [step for step in steps if step > last]
        LOG.warning(
            "Ignoring record steps beyond step %d: %s",
            last,
            ", ".join(str(step) for step in dropped),
        )
        steps = [step for step in steps if step <= last]
    return tuple(steps)


def image_suffix(channels: int) -> str:
    """Return ``.pgm`` for grey and ``.ppm`` for colour images."""
    return ".pgm" if channels == 1 else ".ppm"


def frame_name(step: int, channels: int) -> str:
    """Return the file name of a recorded frame."""
    return f"frame_{step:05d}{image_suffix(channels)}"


def write_metric_log(log: MetricLog, csv_path: Path, *, excel: bool = False) -> list[Path]:
    """Write a metric log as CSV and optionally as a workbook next to it."""
    outputs = [log.write_csv(csv_path)]
    if excel:
        outputs.append(log.write_excel(csv_path.with_suffix(".xlsx")))
    return outputs


def run_command(command: str, body: Callable[[], Sequence[Path]]) -> CommandResult:
    """Run one experiment body and turn its outcome into a result.

    Args:
        command: Command name used in messages
        body: Callable that performs the work and returns the written files

    Returns:
        Successful result listing the outputs, or a failed result carrying
        the error message
    """
    try:
        outputs = tuple(body())
    except Exception as exc:
        LOG.exception("Failed to run %s", command)
        return CommandResult(success=False, command=command, error=str(exc))
    LOG.info("Done. %s wrote %d files", command, len(outputs))
    return CommandResult(success=True, command=command, outputs=outputs)
