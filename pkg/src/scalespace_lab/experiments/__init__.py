"""Runnable experiments behind the command-line interface."""

from __future__ import annotations

from scalespace_lab.experiments.common import ScheduleConfig, ScheduleKind, run_command
from scalespace_lab.experiments.entropy_report import (
    EntropyReportConfig,
    entropy_report,
    run_entropy_report,
)
from scalespace_lab.experiments.fp_compare import FpCompareConfig, run_fp_compare
from scalespace_lab.experiments.osmosis import OsmosisRunConfig, run_osmosis
from scalespace_lab.experiments.probdiff import ProbdiffRunConfig, run_probdiff

__all__ = [
    "EntropyReportConfig",
    "FpCompareConfig",
    "OsmosisRunConfig",
    "ProbdiffRunConfig",
    "ScheduleConfig",
    "ScheduleKind",
    "entropy_report",
    "run_command",
    "run_entropy_report",
    "run_fp_compare",
    "run_osmosis",
    "run_probdiff",
]
