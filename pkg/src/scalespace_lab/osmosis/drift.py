"""Drift vector fields on the staggered pixel grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import DEFAULT_GRID_SPACING
from scalespace_lab.core.types import FloatArray, ImageBuffer


@dataclass(frozen=True, slots=True, eq=False)
class DriftField:
    """Drift components on the faces between neighbouring pixels.

    ``dx[y, x, c]`` lives on the face between pixels ``(y, x)`` and
    ``(y, x + 1)``; ``dy[y, x, c]`` on the face between ``(y, x)`` and
    ``(y + 1, x)``.

    Attributes:
        dx: Horizontal drift, shape ``(height, width - 1, channels)``
        dy: Vertical drift, shape ``(height - 1, width, channels)``
    """

    dx: FloatArray
    dy: FloatArray

    def __post_init__(self) -> None:
        dx = np.array(self.dx, dtype=np.float64, copy=True)
        dy = np.array(self.dy, dtype=np.float64, copy=True)
        if dx.ndim != 3 or dy.ndim != 3:
            raise ShapeMismatchError("Drift components must be (rows, columns, channels) arrays")
        height, width = dx.shape[0], dy.shape[1]
        if dx.shape != (height, width - 1, dx.shape[2]) or dy.shape != (
            height - 1,
            width,
            dx.shape[2],
        ):
            raise ShapeMismatchError(
                f"Inconsistent drift shapes dx={dx.shape}, dy={dy.shape}"
            )
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dy))):
            raise DomainError("Drift values must be finite")
        for name, array in (("dx", dx), ("dy", dy)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @classmethod
    def zeros(cls, width: int, height: int, channels: int = 1) -> DriftField:
        """Return the zero field, which reduces osmosis to homogeneous diffusion."""
        return cls(
            np.zeros((height, width - 1, channels)),
            np.zeros((height - 1, width, channels)),
        )

    @property
    def width(self) -> int:
        """Return the image width the field belongs to."""
        return int(self.dy.shape[1])

    @property
    def height(self) -> int:
        """Return the image height the field belongs to."""
        return int(self.dx.shape[0])

    @property
    def channels(self) -> int:
        """Return the channel count."""
        return int(self.dx.shape[2])

    def matches(self, img: ImageBuffer) -> bool:
        """Return whether the field fits ``img``."""
        return (self.width, self.height, self.channels) == (img.width, img.height, img.channels)

    def max_cell_peclet(self, h: float = DEFAULT_GRID_SPACING) -> float:
        """Return ``max |d| h / 2``; at most 1 keeps the operator's off-diagonals non-negative."""
        largest = max(
            float(np.abs(self.dx).max(initial=0.0)),
            float(np.abs(self.dy).max(initial=0.0)),
        )
        return 0.5 * h * largest


def canonical_drift(v: ImageBuffer, h: float = DEFAULT_GRID_SPACING) -> DriftField:
    """Return the drift ``grad v / v`` evaluated on faces.

    Each face gets ``2 (v_b - v_a) / (h (v_a + v_b))``. With the arithmetic
    mean used for the face value of u, the assembled operator annihilates v.

    Raises:
        DomainError: If v has a non-positive value or h is not positive
    """
    if h <= 0.0:
        raise DomainError("Grid spacing must be positive")
    data = v.data
    if np.any(data <= 0.0):
        raise DomainError("Guidance image must be strictly positive")
    left, right = data[:, :-1], data[:, 1:]
    top, bottom = data[:-1], data[1:]
    return DriftField(
        dx=2.0 * (right - left) / (h * (right + left)),
        dy=2.0 * (bottom - top) / (h * (bottom + top)),
    )
