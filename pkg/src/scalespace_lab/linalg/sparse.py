"""Compressed sparse-row matrices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy import sparse

from scalespace_lab.core.errors import ShapeMismatchError
from scalespace_lab.core.types import FloatArray, IntArray


@dataclass(frozen=True, eq=False)
class SparseMatrixCSR:
    """Validated CSR storage with scipy-backed products.

    Attributes:
        rows: Row count
        cols: Column count
        row_offsets: Start of each row in ``col_indices``/``values``; length rows + 1
        col_indices: Column of every stored entry, sorted within a row, no duplicates
        values: Value of every stored entry
    """

    rows: int
    cols: int
    row_offsets: IntArray
    col_indices: IntArray
    values: FloatArray

    def __post_init__(self) -> None:
        offsets = np.asarray(self.row_offsets, dtype=np.int64)
        indices = np.asarray(self.col_indices, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if offsets.shape != (self.rows + 1,):
            raise ShapeMismatchError("row_offsets must have length rows + 1")
        if offsets[0] != 0 or np.any(np.diff(offsets) < 0):
            raise ValueError("row_offsets must start at 0 and be nondecreasing")
        if offsets[-1] != indices.size or indices.size != values.size:
            raise ShapeMismatchError("row_offsets[-1] must equal the number of stored entries")
        if indices.size and (indices.min() < 0 or indices.max() >= self.cols):
            raise ValueError("col_indices must lie in [0, cols)")
        entry_rows = np.repeat(np.arange(self.rows), np.diff(offsets))
        unsorted = (entry_rows[1:] == entry_rows[:-1]) & (np.diff(indices) <= 0)
        if np.any(unsorted):
            row = int(entry_rows[1:][unsorted][0])
            raise ValueError(f"col_indices of row {row} must be strictly increasing")
        for name, array in (("row_offsets", offsets), ("col_indices", indices), ("values", values)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @classmethod
    def from_scipy(cls, matrix: Any) -> SparseMatrixCSR:
        """Convert any scipy sparse matrix or array, summing duplicate entries."""
        csr = sparse.csr_array(matrix, dtype=np.float64)
        csr.sum_duplicates()
        csr.sort_indices()
        rows, cols = csr.shape
        return cls(
            rows=int(rows),
            cols=int(cols),
            row_offsets=csr.indptr.astype(np.int64),
            col_indices=csr.indices.astype(np.int64),
            values=csr.data.astype(np.float64),
        )

    @classmethod
    def from_dense(cls, dense: npt.ArrayLike) -> SparseMatrixCSR:
        """Store the nonzero entries of a dense two-dimensional array."""
        return cls.from_scipy(sparse.csr_array(np.asarray(dense, dtype=np.float64)))

    @classmethod
    def identity(cls, n: int) -> SparseMatrixCSR:
        """Return the n x n identity."""
        return cls.from_scipy(sparse.identity(n, format="csr"))

    @property
    def shape(self) -> tuple[int, int]:
        """Return ``(rows, cols)``."""
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        """Return the number of stored entries."""
        return int(self.values.size)

    @cached_property
    def _scipy(self) -> Any:
        return sparse.csr_array(
            (self.values, self.col_indices, self.row_offsets),
            shape=self.shape,
        )

    def to_scipy(self) -> Any:
        """Return an equivalent ``scipy.sparse.csr_array``."""
        return self._scipy.copy()

    def to_dense(self) -> FloatArray:
        """Return the matrix as a dense array."""
        dense: FloatArray = self._scipy.toarray()
        return dense

    def diagonal(self) -> FloatArray:
        """Return the main diagonal."""
        diag: FloatArray = self._scipy.diagonal()
        return diag

    def column_sums(self) -> FloatArray:
        """Return the sum of every column."""
        sums: FloatArray = np.asarray(self._scipy.sum(axis=0), dtype=np.float64).ravel()
        return sums


def matvec(a: SparseMatrixCSR, x: npt.ArrayLike) -> FloatArray:
    """Return ``a @ x``.

    Raises:
        ShapeMismatchError: If ``x`` does not have ``a.cols`` entries
    """
    vector = np.asarray(x, dtype=np.float64)
    if vector.shape != (a.cols,):
        raise ShapeMismatchError(f"Expected a vector of length {a.cols}, got shape {vector.shape}")
    product: FloatArray = a._scipy @ vector
    return product
