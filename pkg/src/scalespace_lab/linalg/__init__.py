"""Sparse matrices and the BiCGSTAB solver."""

from __future__ import annotations

from scalespace_lab.linalg.bicgstab import SolveReport, SolveStatus, bicgstab
from scalespace_lab.linalg.sparse import SparseMatrixCSR, matvec

__all__ = [
    "SolveReport",
    "SolveStatus",
    "SparseMatrixCSR",
    "bicgstab",
    "matvec",
]
