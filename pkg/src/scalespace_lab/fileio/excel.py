"""Excel formatting utilities."""

from __future__ import annotations

from typing import TYPE_CHECKING

from openpyxl.styles import Alignment
from openpyxl.utils import get_column_letter

if TYPE_CHECKING:
    from collections.abc import Sequence

    from openpyxl.worksheet.worksheet import Worksheet

MIN_COLUMN_WIDTH = 10
MAX_COLUMN_WIDTH = 40
NUMBER_FORMAT = "0.000000E+00"


def metric_column_widths(columns: Sequence[str]) -> dict[str, int]:
    """Return a width per column letter that fits each header name."""
    return {
        get_column_letter(index): min(max(len(name) + 2, MIN_COLUMN_WIDTH), MAX_COLUMN_WIDTH)
        for index, name in enumerate(columns, start=1)
    }


def format_metric_worksheet(ws: Worksheet | None, columns: Sequence[str]) -> None:
    """Apply column widths, number formats and a centred header to a metric sheet.

    Args:
        ws: Worksheet to format
        columns: Column names in sheet order

    Raises:
        RuntimeError: If no worksheet is available
    """
    if ws is None:
        raise RuntimeError("Failed to load active worksheet")

    for col_letter, width in metric_column_widths(columns).items():
        ws.column_dimensions[col_letter].width = width

    for row in ws.iter_rows(min_row=2, max_row=ws.max_row):
        for cell in row:
            if isinstance(cell.value, float):
                cell.number_format = NUMBER_FORMAT

    header_alignment = Alignment(horizontal="center", vertical="center")
    for cell in ws[1]:
        cell.alignment = header_alignment
    ws.freeze_panes = "B2"
