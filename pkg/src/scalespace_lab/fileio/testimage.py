"""Built-in test scene and resolution of ``--input`` values."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.limits import DEFAULT_MAXVAL
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.fileio.pnm import decode_pnm

SYNTHETIC_PREFIX = "synthetic:"
_SYNTHETIC_SIZE = re.compile(r"^(\d+)x(\d+)(?:x(\d+))?$")


def synthetic_scene(width: int, height: int, channels: int = 1) -> ImageBuffer:
    """Return a deterministic 8-bit scene with smooth and sharp structure.

    The scene holds a diagonal gradient, a bright disc, a dark square and a
    band of vertical stripes; colour channels get phase-shifted variants.
    Values are integers in ``[0, 255]``.

    Raises:
        DomainError: If a dimension is not positive
    """
    if min(width, height, channels) < 1:
        raise DomainError("Image dimensions must be positive")
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    ys = (y + 0.5) / height
    xs = (x + 0.5) / width
    layers = []
    for c in range(channels):
        shift = c / max(channels, 1)
        scene = 40.0 + 120.0 * (0.5 * xs + 0.5 * ((ys + shift) % 1.0))
        disc = (xs - 0.65) ** 2 + (ys - 0.4) ** 2 < 0.04
        scene[disc] = 230.0 - 20.0 * c
        square = (np.abs(xs - 0.3) < 0.12) & (np.abs(ys - 0.65) < 0.12)
        scene[square] = 15.0 + 10.0 * c
        band = (ys > 0.85) & (np.floor(xs * 16.0) % 2 == 0)
        scene[band] = 200.0
        layers.append(np.clip(np.round(scene), 0.0, 255.0))
    return ImageBuffer(np.stack(layers, axis=2))


def parse_synthetic_size(spec: str) -> tuple[int, int, int]:
    """Parse ``WxH`` or ``WxHxC`` into width, height and channels.

    Raises:
        DomainError: If the text does not have that form
    """
    match = _SYNTHETIC_SIZE.match(spec)
    if match is None:
        raise DomainError(f"Expected WxH or WxHxC, got {spec!r}")
    width, height = int(match.group(1)), int(match.group(2))
    channels = int(match.group(3)) if match.group(3) else 1
    return width, height, channels


def load_input_image(spec: str) -> tuple[ImageBuffer, int]:
    """Load ``synthetic:WxH[xC]`` or a PNM file path together with its maxval.

    Synthetic scenes use maxval ``DEFAULT_MAXVAL``.

    Raises:
        DomainError: If a synthetic size is malformed
        PnmFormatError: If the file is not a readable PNM image
        FileNotFoundError: If the file does not exist
    """
    if spec.startswith(SYNTHETIC_PREFIX):
        size = parse_synthetic_size(spec[len(SYNTHETIC_PREFIX) :])
        return synthetic_scene(*size), DEFAULT_MAXVAL
    img, header = decode_pnm(Path(spec).read_bytes())
    return img, header.maxval
