"""Discrete osmosis operator ``A u = laplace(u) - div(d u)`` with reflecting boundaries."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import DEFAULT_GRID_SPACING
from scalespace_lab.core.types import FloatArray, ImageBuffer
from scalespace_lab.linalg.sparse import SparseMatrixCSR, matvec
from scalespace_lab.osmosis.drift import DriftField

LOG = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class OsmosisOperator:
    """One sparse operator per channel, acting on row-major pixel vectors.

    Attributes:
        matrices: Operator of every channel, each ``(w*h) x (w*h)``
        width: Image width
        height: Image height
        h: Grid spacing
    """

    matrices: tuple[SparseMatrixCSR, ...]
    width: int
    height: int
    h: float

    @property
    def channels(self) -> int:
        """Return the number of channels."""
        return len(self.matrices)

    def apply(self, u: ImageBuffer) -> ImageBuffer:
        """Return ``A u`` channel by channel.

        Raises:
            ShapeMismatchError: If u does not fit the operator
        """
        self.check_fits(u)
        pixels = u.data.reshape(u.pixel_count, u.channels)
        result = np.stack(
            [matvec(matrix, pixels[:, c]) for c, matrix in enumerate(self.matrices)],
            axis=1,
        )
        return u.with_data(result)

    def system_matrix(self, channel: int, tau: float) -> SparseMatrixCSR:
        """Return ``I - tau A`` for one channel."""
        matrix = self.matrices[channel].to_scipy()
        identity = sparse.identity(matrix.shape[0], format="csr")
        return SparseMatrixCSR.from_scipy(identity - tau * matrix)

    def check_fits(self, u: ImageBuffer) -> None:
        """Raise ShapeMismatchError unless u has the operator's dimensions."""
        if (u.width, u.height, u.channels) != (self.width, self.height, self.channels):
            raise ShapeMismatchError(
                f"Image {u.width}x{u.height}x{u.channels} does not fit operator "
                f"{self.width}x{self.height}x{self.channels}"
            )


def _face_entries(
    a: FloatArray,
    b: FloatArray,
    drift: FloatArray,
    h: float,
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Return COO triplets of all faces between pixels ``a`` and ``b``.

    The face flux ``F = (u_b - u_a) / h - d (u_a + u_b) / 2`` adds ``F / h``
    to pixel a and subtracts it from pixel b.
    """
    coef_a = (-1.0 / h - 0.5 * drift) / h
    coef_b = (1.0 / h - 0.5 * drift) / h
    rows = np.concatenate((a, a, b, b))
    cols = np.concatenate((a, b, a, b))
    values = np.concatenate((coef_a, coef_b, -coef_a, -coef_b))
    return rows, cols, values


def assemble_channel(
    dx: FloatArray,
    dy: FloatArray,
    width: int,
    height: int,
    h: float,
) -> SparseMatrixCSR:
    """Assemble the operator of one channel from its face drifts."""
    index = np.arange(width * height).reshape(height, width)
    parts = [
        _face_entries(index[:, :-1].ravel(), index[:, 1:].ravel(), dx.ravel(), h),
        _face_entries(index[:-1, :].ravel(), index[1:, :].ravel(), dy.ravel(), h),
    ]
    rows = np.concatenate([part[0] for part in parts])
    cols = np.concatenate([part[1] for part in parts])
    values = np.concatenate([part[2] for part in parts])
    size = width * height
    coo = sparse.coo_array((values, (rows, cols)), shape=(size, size))
    return SparseMatrixCSR.from_scipy(coo)


def assemble_operator(
    d: DriftField,
    width: int,
    height: int,
    h: float = DEFAULT_GRID_SPACING,
) -> OsmosisOperator:
    """Assemble the osmosis operator for every channel of a drift field.

    Every column of each matrix sums to zero. If ``|d| h / 2 <= 1`` on all
    faces, every off-diagonal entry is non-negative.

    Raises:
        ShapeMismatchError: If the drift field does not fit ``width x height``
        DomainError: If h is not positive
    """
    if h <= 0.0:
        raise DomainError("Grid spacing must be positive")
    if (d.width, d.height) != (width, height):
        raise ShapeMismatchError(
            f"Drift field for {d.width}x{d.height} does not fit {width}x{height}"
        )
    peclet = d.max_cell_peclet(h)
    if peclet > 1.0:
        LOG.warning("Drift exceeds the positivity bound: max |d| h / 2 = %.4g > 1", peclet)
    matrices = tuple(
        assemble_channel(d.dx[:, :, c], d.dy[:, :, c], width, height, h)
        for c in range(d.channels)
    )
    return OsmosisOperator(matrices=matrices, width=width, height=height, h=h)
