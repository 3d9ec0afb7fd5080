"""Display transform for frames whose values live on the noise range."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any

import numpy as np

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.limits import DEFAULT_MAXVAL, DISPLAY_RANGE
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.fileio.atomic import write_text_atomic

if TYPE_CHECKING:
    from pathlib import Path

SIDECAR_SUFFIX = ".json"


def to_display(
    img: ImageBuffer,
    maxval: int = DEFAULT_MAXVAL,
    value_range: tuple[float, float] = DISPLAY_RANGE,
) -> ImageBuffer:
    """Map ``value_range`` affinely onto ``[0, maxval]`` and clamp outside values."""
    lo, hi = value_range
    if hi <= lo:
        raise DomainError(f"Empty display range {value_range}")
    scaled = (img.data - lo) * (maxval / (hi - lo))
    return img.with_data(np.clip(scaled, 0.0, float(maxval)))


def from_display(
    img: ImageBuffer,
    maxval: int = DEFAULT_MAXVAL,
    value_range: tuple[float, float] = DISPLAY_RANGE,
) -> ImageBuffer:
    """Invert :func:`to_display` for unclamped values."""
    lo, hi = value_range
    if hi <= lo:
        raise DomainError(f"Empty display range {value_range}")
    return img.with_data(lo + img.data * ((hi - lo) / maxval))


def sidecar_path(frame_path: Path) -> Path:
    """Return the metadata path written next to a frame."""
    return frame_path.with_name(frame_path.name + SIDECAR_SUFFIX)


def display_metadata(
    step: int | None,
    maxval: int = DEFAULT_MAXVAL,
    value_range: tuple[float, float] | None = DISPLAY_RANGE,
    clamped_fraction: float = 0.0,
    **extra: Any,
) -> dict[str, Any]:
    """Describe how a frame file maps back to model values.

    ``value_range=None`` marks frames written in grey-value units; ``step=None``
    marks files that are not frames of the evolution.
    """
    transform: dict[str, Any]
    if value_range is None:
        transform = {"kind": "identity"}
    else:
        transform = {"kind": "affine", "from": list(value_range), "to": [0, maxval]}
    return {
        "step": step,
        "maxval": maxval,
        "transform": transform,
        "clamped_fraction": clamped_fraction,
        **extra,
    }


def write_sidecar(frame_path: Path, metadata: dict[str, Any]) -> Path:
    """Write frame metadata as sorted, indented JSON and return its path."""
    target = sidecar_path(frame_path)
    write_text_atomic(target, json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    return target
