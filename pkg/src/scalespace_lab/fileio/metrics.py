"""Per-step metric tables written as CSV (and optionally as a workbook)."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import pandas as pd

from scalespace_lab.fileio.atomic import atomic_target
from scalespace_lab.fileio.excel import format_metric_worksheet

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

LOG = logging.getLogger(__name__)

STEP_COLUMN = "step"

# Enough digits to read back the same double.
FLOAT_FORMAT = "%.17g"


class MetricLog:
    """Rows of named metrics keyed by step index.

    Column order is ``step`` followed by metric names in first-seen order.
    A metric missing from a row is written as an empty field.
    """

    __slots__ = ("_columns", "_rows")

    def __init__(self, columns: tuple[str, ...] = ()) -> None:
        self._columns: list[str] = [name for name in columns if name != STEP_COLUMN]
        self._rows: list[dict[str, float | int | str]] = []

    @property
    def columns(self) -> tuple[str, ...]:
        """Return all column names, ``step`` first."""
        return (STEP_COLUMN, *self._columns)

    def __len__(self) -> int:
        """Return the number of rows."""
        return len(self._rows)

    def append(self, step: int, values: Mapping[str, float | int | str]) -> None:
        """Add one row of metrics for ``step``."""
        for name in values:
            if name == STEP_COLUMN:
                raise ValueError(f"'{STEP_COLUMN}' is reserved for the step index")
            if name not in self._columns:
                self._columns.append(name)
        self._rows.append({STEP_COLUMN: step, **values})

    def to_frame(self) -> pd.DataFrame:
        """Return the log as a DataFrame with the documented column order."""
        return pd.DataFrame(self._rows, columns=list(self.columns))

    def column(self, name: str) -> list[float | int | str | None]:
        """Return the values of one column, None where a row lacks it."""
        return [row.get(name) for row in self._rows]

    def write_csv(self, output_path: Path) -> Path:
        """Write UTF-8 CSV with a header row and LF line endings, atomically."""
        with atomic_target(output_path) as tmp_path:
            self.to_frame().to_csv(
                tmp_path,
                index=False,
                encoding="utf-8",
                lineterminator="\n",
                float_format=FLOAT_FORMAT,
            )
        LOG.info("Wrote %d metric rows to %s", len(self), output_path)
        return output_path

    def write_excel(self, output_path: Path) -> Path:
        """Write a formatted workbook copy of the log, atomically."""
        with atomic_target(output_path) as tmp_path:
            with pd.ExcelWriter(tmp_path, engine="openpyxl") as writer:
                self.to_frame().to_excel(writer, index=False, sheet_name="metrics")
                LOG.info("Formatting Excel output")
                format_metric_worksheet(writer.book.active, self.columns)
        return output_path
