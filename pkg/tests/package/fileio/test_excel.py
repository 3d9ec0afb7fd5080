"""Tests for Excel formatting utilities."""

from __future__ import annotations

import pytest
from openpyxl import Workbook

import scalespace_lab.fileio.excel as excel


def test_metric_column_widths_fit_headers() -> None:
    """Pad header names and clamp widths to the configured bounds."""
    widths = excel.metric_column_widths(["step", "conditional_entropy_deficit", "x" * 60])
    assert widths == {"A": excel.MIN_COLUMN_WIDTH, "B": 29, "C": excel.MAX_COLUMN_WIDTH}


def test_format_metric_worksheet_applies_styles() -> None:
    """Apply widths, number formats and header alignment before a workbook is saved."""
    workbook = Workbook()
    worksheet = workbook.active
    worksheet.append(["step", "relative_entropy"])
    worksheet.append([0, -1.5])
    worksheet.append([1, None])

    excel.format_metric_worksheet(worksheet, ["step", "relative_entropy"])

    assert worksheet.column_dimensions["A"].width == excel.MIN_COLUMN_WIDTH
    assert worksheet.column_dimensions["B"].width == 18
    assert worksheet["A1"].alignment.horizontal == "center"
    assert worksheet["B1"].alignment.vertical == "center"
    assert worksheet["B2"].number_format == excel.NUMBER_FORMAT
    assert worksheet["A2"].number_format == "General"
    assert worksheet["B3"].value is None
    assert worksheet.freeze_panes == "B2"


def test_format_metric_worksheet_raises_without_active_sheet() -> None:
    """Reject a missing worksheet before attempting to save a workbook."""
    with pytest.raises(RuntimeError, match="Failed to load active worksheet"):
        excel.format_metric_worksheet(None, ["step"])
