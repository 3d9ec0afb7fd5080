"""Scale-space laboratory - probabilistic diffusion, Fokker-Planck and osmosis experiments."""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

from scalespace_lab.core.types import CommandResult, ImageBuffer
from scalespace_lab.experiments import (
    EntropyReportConfig,
    FpCompareConfig,
    OsmosisRunConfig,
    ProbdiffRunConfig,
    run_entropy_report,
    run_fp_compare,
    run_osmosis,
    run_probdiff,
)

try:
    __version__ = version("scalespace-lab")
except PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "CommandResult",
    "EntropyReportConfig",
    "FpCompareConfig",
    "ImageBuffer",
    "OsmosisRunConfig",
    "ProbdiffRunConfig",
    "__version__",
    "run_entropy_report",
    "run_fp_compare",
    "run_osmosis",
    "run_probdiff",
]
