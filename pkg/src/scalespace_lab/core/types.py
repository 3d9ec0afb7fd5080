"""Core types and data structures for the scale-space laboratory."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from scalespace_lab.core.errors import DomainError, ShapeMismatchError

if TYPE_CHECKING:
    from pathlib import Path

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


def _frozen(array: npt.NDArray[np.generic]) -> npt.NDArray[np.generic]:
    """Mark an array read-only and return it."""
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True, eq=False)
class ImageBuffer:
    """Dense real-valued raster stored as 64-bit floats.

    The array has shape ``(height, width, channels)`` in C order, which is
    row-major, channel-interleaved storage. A two-dimensional input is read as
    a single-channel image. The stored array is a private read-only copy.

    Attributes:
        data: Pixel values, shape ``(height, width, channels)``
    """

    data: FloatArray

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=np.float64, copy=True)
        if array.ndim == 2:
            array = array[:, :, np.newaxis]
        if array.ndim != 3 or min(array.shape) < 1:
            raise ShapeMismatchError(
                f"Image data must have shape (height, width[, channels]), got {array.shape}"
            )
        if not np.all(np.isfinite(array)):
            raise DomainError("Image data must be finite (no NaN or Inf)")
        object.__setattr__(self, "data", _frozen(np.ascontiguousarray(array)))

    @classmethod
    def from_flat(
        cls,
        values: npt.ArrayLike,
        width: int,
        height: int,
        channels: int = 1,
    ) -> ImageBuffer:
        """Build an image from row-major, channel-interleaved values.

        Raises:
            ShapeMismatchError: If the value count is not width * height * channels
        """
        flat = np.asarray(values, dtype=np.float64).ravel()
        expected = width * height * channels
        if flat.size != expected:
            raise ShapeMismatchError(
                f"Expected {expected} values for {width}x{height}x{channels}, got {flat.size}"
            )
        return cls(flat.reshape(height, width, channels))

    @classmethod
    def full(cls, width: int, height: int, value: float, channels: int = 1) -> ImageBuffer:
        """Return a constant image."""
        return cls(np.full((height, width, channels), value, dtype=np.float64))

    @property
    def height(self) -> int:
        """Return the number of pixel rows."""
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        """Return the number of pixel columns."""
        return int(self.data.shape[1])

    @property
    def channels(self) -> int:
        """Return the number of channels."""
        return int(self.data.shape[2])

    @property
    def size(self) -> int:
        """Return the element count ``width * height * channels``."""
        return int(self.data.size)

    @property
    def pixel_count(self) -> int:
        """Return the number of pixel positions ``width * height``."""
        return self.width * self.height

    @property
    def flat(self) -> FloatArray:
        """Return a read-only flat view in storage order."""
        return self.data.reshape(-1)

    def with_data(self, data: npt.ArrayLike) -> ImageBuffer:
        """Return a new image of the same shape holding ``data``.

        Raises:
            ShapeMismatchError: If ``data`` cannot be reshaped to this image's shape
        """
        array = np.asarray(data, dtype=np.float64)
        if array.size != self.size:
            raise ShapeMismatchError(f"Expected {self.size} values, got {array.size}")
        return ImageBuffer(array.reshape(self.data.shape))

    def same_shape(self, other: ImageBuffer) -> bool:
        """Return whether ``other`` has the same height, width and channels."""
        return self.data.shape == other.data.shape


class PermutationMode(StrEnum):
    """How a permutation addresses an image."""

    PIXEL = "pixel"
    ELEMENT = "element"


@dataclass(frozen=True, slots=True, eq=False)
class Permutation:
    """Bijection on ``{0, ..., n-1}`` with ``output[mapping[j]] = input[j]``.

    In pixel mode the indices address pixel positions ``y * width + x`` and
    every channel is moved identically. In element mode they address the flat
    storage order of all ``width * height * channels`` values.

    Attributes:
        mapping: Target index for every source index
        mode: Whether indices address pixels or individual values
    """

    mapping: IntArray
    mode: PermutationMode = PermutationMode.PIXEL

    def __post_init__(self) -> None:
        mapping = np.array(self.mapping, dtype=np.int64, copy=True).ravel()
        if not np.array_equal(np.sort(mapping), np.arange(mapping.size)):
            raise DomainError("Permutation mapping must be a bijection on 0..n-1")
        object.__setattr__(self, "mapping", _frozen(mapping))
        object.__setattr__(self, "mode", PermutationMode(self.mode))

    @property
    def size(self) -> int:
        """Return n, the number of permuted indices."""
        return int(self.mapping.size)

    def inverse(self) -> Permutation:
        """Return the permutation undoing this one."""
        inverse = np.empty_like(self.mapping)
        inverse[self.mapping] = np.arange(self.size)
        return Permutation(inverse, self.mode)

    def then(self, other: Permutation) -> Permutation:
        """Return the permutation applying ``self`` first and ``other`` second.

        Raises:
            ShapeMismatchError: If sizes or modes differ
        """
        if other.size != self.size or other.mode != self.mode:
            raise ShapeMismatchError("Only permutations of equal size and mode compose")
        return Permutation(other.mapping[self.mapping], self.mode)


@dataclass(frozen=True, slots=True)
class CommandResult:
    """Result of a laboratory command.

    Attributes:
        success: Whether the command succeeded
        command: Command name
        outputs: Files written by the command
        error: Error message if the command failed
    """

    success: bool
    command: str
    outputs: tuple[Path, ...] = ()
    error: str | None = None

    def __str__(self) -> str:
        """Return a human-readable summary of the result."""
        if self.success:
            unit = "file" if len(self.outputs) == 1 else "files"
            return f"{self.command}: wrote {len(self.outputs)} {unit}"
        return f"{self.command} failed: {self.error}"
