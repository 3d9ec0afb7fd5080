"""Deterministic random-number streams.

Generation algorithm (pinned): numpy's ``PCG64`` bit generator seeded with the
stream seed, and ``Generator.standard_normal``, which turns raw 64-bit draws
into normals with the ziggurat method. Every normal is produced element by
element from the raw stream, so drawing ``a`` values and then ``b`` values
yields exactly the same numbers as drawing ``a + b`` at once. That makes the
output a function of ``(seed, position)`` alone.
"""

from __future__ import annotations

import numpy as np

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.types import FloatArray, ImageBuffer

_MAX_SEED = 2**64 - 1


class RngStream:
    """Single-owner stream of standard-normal variates.

    Concurrent use needs independent streams, obtained from distinct seeds or
    from :meth:`spawn`.
    """

    __slots__ = ("_generator", "_position", "_seed")

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MAX_SEED:
            raise DomainError(f"Seed must be a 64-bit unsigned integer, got {seed}")
        self._seed = int(seed)
        self._generator = np.random.Generator(np.random.PCG64(self._seed))
        self._position = 0

    @classmethod
    def at(cls, seed: int, position: int) -> RngStream:
        """Return a stream for ``seed`` that has already produced ``position`` draws."""
        if position < 0:
            raise DomainError("Stream position must be non-negative")
        stream = cls(seed)
        stream.normal(position)
        return stream

    @property
    def seed(self) -> int:
        """Return the stream seed."""
        return self._seed

    @property
    def position(self) -> int:
        """Return the number of variates drawn so far."""
        return self._position

    def normal(self, count: int) -> FloatArray:
        """Draw ``count`` i.i.d. N(0, 1) variates and advance the stream."""
        if count < 0:
            raise DomainError("Draw count must be non-negative")
        draws: FloatArray = self._generator.standard_normal(count)
        self._position += count
        return draws

    def spawn(self, count: int) -> list[RngStream]:
        """Return ``count`` independent child streams.

        Child seeds come from ``SeedSequence(seed).spawn(count)``, so they depend
        only on this stream's seed, never on its position.
        """
        children = np.random.SeedSequence(self._seed).spawn(count)
        return [RngStream(int(child.generate_state(1, dtype=np.uint64)[0])) for child in children]

    def __repr__(self) -> str:
        """Return the seed and position."""
        return f"RngStream(seed={self._seed}, position={self._position})"


def sample_standard_normal(
    rng: RngStream,
    width: int,
    height: int,
    channels: int = 1,
) -> ImageBuffer:
    """Draw an image of i.i.d. N(0, 1) values.

    Values are assigned in storage order (row-major, channel-interleaved) and
    the stream advances by ``width * height * channels``.

    Raises:
        DomainError: If a dimension is not positive
    """
    if min(width, height, channels) < 1:
        raise DomainError("Image dimensions must be positive")
    draws = rng.normal(width * height * channels)
    return ImageBuffer(draws.reshape(height, width, channels))
