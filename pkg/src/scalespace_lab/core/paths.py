"""Default output locations for laboratory runs."""

from __future__ import annotations

from pathlib import Path

DATA_DIR = Path("data")
OUTPUT_DIR = DATA_DIR / "output"

DEFAULT_PROBDIFF_OUTDIR = OUTPUT_DIR / "probdiff"
DEFAULT_OSMOSIS_OUTDIR = OUTPUT_DIR / "osmosis"
DEFAULT_FP_COMPARE_OUTPUT = OUTPUT_DIR / "fp_compare.csv"
DEFAULT_ENTROPY_REPORT_OUTPUT = OUTPUT_DIR / "entropy_report.csv"
