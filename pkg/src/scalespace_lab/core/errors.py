"""Exception types shared across the laboratory."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from scalespace_lab.linalg.bicgstab import SolveReport


class ShapeMismatchError(ValueError):
    """Two operands disagree in shape or element count."""


class DomainError(ValueError):
    """A value lies outside the range an operation is defined on."""


class StabilityError(ValueError):
    """A discretisation parameter violates the documented stability bound."""


class PnmFormatError(ValueError):
    """A PNM file is malformed, truncated or uses an unsupported variant."""


class ScheduleFormatError(ValueError):
    """A schedule file holds something other than one beta per line."""


class SolverError(RuntimeError):
    """An iterative solve finished without converging.

    Attributes:
        report: Solver report of the failed solve
    """

    def __init__(self, message: str, report: SolveReport) -> None:
        super().__init__(message)
        self.report = report
