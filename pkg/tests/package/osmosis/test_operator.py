"""Tests for the osmosis operator."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.osmosis.drift import DriftField, canonical_drift
from scalespace_lab.osmosis.guidance import noise_guidance
from scalespace_lab.osmosis.operator import assemble_operator


def _guidance(width: int = 6, height: int = 5, channels: int = 2) -> ImageBuffer:
    return noise_guidance(width, height, channels, RngStream(17))


class TestAssembleOperator:
    """Tests for assemble_operator."""

    @pytest.mark.parametrize("h", [1.0, 0.5])
    def test_annihilates_guidance(self, h: float) -> None:
        v = _guidance()
        op = assemble_operator(canonical_drift(v, h), v.width, v.height, h)
        assert np.allclose(op.apply(v).data, 0.0, atol=1e-9)

    def test_zero_column_sums(self) -> None:
        v = _guidance()
        op = assemble_operator(canonical_drift(v), v.width, v.height)
        for matrix in op.matrices:
            assert np.allclose(matrix.column_sums(), 0.0, atol=1e-12)

    def test_off_diagonals_are_non_negative(self) -> None:
        v = _guidance(channels=1)
        op = assemble_operator(canonical_drift(v), v.width, v.height)
        dense = op.matrices[0].to_dense()
        off_diagonal = dense[~np.eye(dense.shape[0], dtype=bool)]
        assert np.all(off_diagonal >= 0.0)
        assert np.all(np.diag(dense) <= 0.0)

    def test_zero_drift_is_the_neumann_laplacian(self) -> None:
        op = assemble_operator(DriftField.zeros(3, 1), 3, 1)
        expected = np.array([[-1.0, 1.0, 0.0], [1.0, -2.0, 1.0], [0.0, 1.0, -1.0]])
        assert np.array_equal(op.matrices[0].to_dense(), expected)

    def test_single_pixel_is_zero(self) -> None:
        op = assemble_operator(DriftField.zeros(1, 1), 1, 1)
        assert op.matrices[0].shape == (1, 1)
        assert op.matrices[0].to_dense().tolist() == [[0.0]]

    def test_system_matrix(self) -> None:
        op = assemble_operator(DriftField.zeros(3, 1), 3, 1)
        system = op.system_matrix(0, 0.5).to_dense()
        assert list(np.diag(system)) == [1.5, 2.0, 1.5]
        assert system[0, 1] == -0.5

    def test_warns_above_positivity_bound(self, caplog: pytest.LogCaptureFixture) -> None:
        field = DriftField(np.full((1, 1, 1), 3.0), np.zeros((0, 2, 1)))
        with caplog.at_level(logging.WARNING):
            op = assemble_operator(field, 2, 1)
        assert "positivity bound" in caplog.text
        assert op.matrices[0].to_dense()[0, 1] < 0.0

    def test_argument_checks(self) -> None:
        with pytest.raises(ShapeMismatchError):
            assemble_operator(DriftField.zeros(3, 2), 2, 3)
        with pytest.raises(DomainError):
            assemble_operator(DriftField.zeros(2, 2), 2, 2, h=0.0)
        op = assemble_operator(DriftField.zeros(2, 2), 2, 2)
        with pytest.raises(ShapeMismatchError, match="does not fit"):
            op.apply(ImageBuffer.full(2, 2, 1.0, 3))
