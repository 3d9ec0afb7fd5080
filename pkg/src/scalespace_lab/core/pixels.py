"""Pixel permutations and channel statistics."""

from __future__ import annotations

import math

import numpy as np

from scalespace_lab.core.errors import ShapeMismatchError
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import FloatArray, ImageBuffer, Permutation, PermutationMode


def identity_permutation(n: int, mode: PermutationMode = PermutationMode.PIXEL) -> Permutation:
    """Return the identity permutation on ``n`` indices."""
    return Permutation(np.arange(n), mode)


def random_permutation(
    n: int,
    rng: RngStream,
    mode: PermutationMode = PermutationMode.PIXEL,
) -> Permutation:
    """Return a uniformly random permutation drawn from ``rng``.

    The mapping is the stable argsort of ``n`` normal draws, so it consumes
    exactly ``n`` variates.
    """
    keys = rng.normal(n)
    return Permutation(np.argsort(keys, kind="stable"), mode)


def cyclic_shift(width: int, height: int, dx: int, dy: int) -> Permutation:
    """Return the pixel permutation translating an image by ``(dx, dy)`` with wrap-around."""
    ys, xs = np.divmod(np.arange(width * height), width)
    targets = ((ys + dy) % height) * width + (xs + dx) % width
    return Permutation(targets, PermutationMode.PIXEL)


def rotate90(width: int, height: int, turns: int = 1) -> Permutation:
    """Return the pixel permutation rotating a square image by ``turns`` quarter turns.

    The orientation matches ``numpy.rot90`` (counter-clockwise).

    Raises:
        ShapeMismatchError: If the image is not square
    """
    if width != height:
        raise ShapeMismatchError("Quarter-turn rotations permute pixels only on square images")
    sources = np.rot90(np.arange(width * height).reshape(height, width), turns).ravel()
    mapping = np.empty_like(sources)
    mapping[sources] = np.arange(sources.size)
    return Permutation(mapping, PermutationMode.PIXEL)


def apply_permutation(img: ImageBuffer, p: Permutation) -> ImageBuffer:
    """Reorder an image so that ``output[p(j)] = input[j]``.

    Raises:
        ShapeMismatchError: If the permutation size does not match the image
    """
    if p.mode is PermutationMode.PIXEL:
        if p.size != img.pixel_count:
            raise ShapeMismatchError(
                f"Pixel permutation of size {p.size} cannot reorder {img.pixel_count} pixels"
            )
        source = img.data.reshape(img.pixel_count, img.channels)
    else:
        if p.size != img.size:
            raise ShapeMismatchError(
                f"Element permutation of size {p.size} cannot reorder {img.size} values"
            )
        source = img.flat
    permuted = np.empty_like(source)
    permuted[p.mapping] = source
    return img.with_data(permuted)


def mean_value(img: ImageBuffer) -> FloatArray:
    """Return the arithmetic mean of every channel.

    Sums are correctly rounded (``math.fsum``), so the result does not depend
    on pixel order.
    """
    channels = img.data.reshape(img.pixel_count, img.channels)
    return np.array(
        [math.fsum(channels[:, c].tolist()) / img.pixel_count for c in range(img.channels)],
        dtype=np.float64,
    )
