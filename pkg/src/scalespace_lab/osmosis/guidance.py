"""Transforms that make grey values strictly positive for osmosis."""

from __future__ import annotations

import numpy as np

from scalespace_lab.core.limits import DISPLAY_RANGE
from scalespace_lab.core.rng import RngStream, sample_standard_normal
from scalespace_lab.core.types import ImageBuffer

# Added to 8-bit file values before filtering and removed afterwards.
POSITIVITY_OFFSET = 1.0

# Noise guidance lands in [1, 256], the offset range of 8-bit data.
GUIDANCE_RANGE = (1.0, 256.0)


def to_positive(img: ImageBuffer, offset: float = POSITIVITY_OFFSET) -> ImageBuffer:
    """Shift grey values up by ``offset``."""
    return img.with_data(img.data + offset)


def from_positive(img: ImageBuffer, offset: float = POSITIVITY_OFFSET) -> ImageBuffer:
    """Undo :func:`to_positive`."""
    return img.with_data(img.data - offset)


def noise_guidance(
    width: int,
    height: int,
    channels: int,
    rng: RngStream,
) -> ImageBuffer:
    """Return a strictly positive guidance image derived from standard-normal noise.

    The sample is clamped to ``DISPLAY_RANGE`` and mapped affinely onto
    ``GUIDANCE_RANGE``, so 0 lands at 128.5.
    """
    noise = sample_standard_normal(rng, width, height, channels).data
    lo, hi = DISPLAY_RANGE
    out_lo, out_hi = GUIDANCE_RANGE
    clamped = np.clip(noise, lo, hi)
    return ImageBuffer(out_lo + (clamped - lo) * (out_hi - out_lo) / (hi - lo))
