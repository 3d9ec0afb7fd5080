"""Core module for the scale-space laboratory."""

from __future__ import annotations

from scalespace_lab.core.errors import (
    DomainError,
    PnmFormatError,
    ScheduleFormatError,
    ShapeMismatchError,
    SolverError,
    StabilityError,
)
from scalespace_lab.core.pixels import (
    apply_permutation,
    cyclic_shift,
    identity_permutation,
    mean_value,
    random_permutation,
    rotate90,
)
from scalespace_lab.core.rng import RngStream, sample_standard_normal
from scalespace_lab.core.types import (
    CommandResult,
    FloatArray,
    ImageBuffer,
    IntArray,
    Permutation,
    PermutationMode,
)

__all__ = [
    "CommandResult",
    "DomainError",
    "FloatArray",
    "ImageBuffer",
    "IntArray",
    "Permutation",
    "PermutationMode",
    "PnmFormatError",
    "RngStream",
    "ScheduleFormatError",
    "ShapeMismatchError",
    "SolverError",
    "StabilityError",
    "apply_permutation",
    "cyclic_shift",
    "identity_permutation",
    "mean_value",
    "random_permutation",
    "rotate90",
    "sample_standard_normal",
]
