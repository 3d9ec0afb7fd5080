"""Tests for the display transform and frame sidecars."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.fileio.display import (
    display_metadata,
    from_display,
    sidecar_path,
    to_display,
    write_sidecar,
)


class TestDisplayTransform:
    """Tests for to_display and from_display."""

    def test_maps_range_onto_maxval(self) -> None:
        img = ImageBuffer(np.array([[-4.0, 0.0, 4.0]]))
        assert to_display(img).flat.tolist() == [0.0, 127.5, 255.0]

    def test_clamps_outside_values(self) -> None:
        img = ImageBuffer(np.array([[-9.0, 9.0]]))
        assert to_display(img, maxval=1023).flat.tolist() == [0.0, 1023.0]

    def test_inverse(self) -> None:
        img = ImageBuffer(np.array([[-3.5, 0.25, 1.0]]))
        restored = from_display(to_display(img, 65535), 65535)
        assert np.allclose(restored.data, img.data)

    def test_rejects_empty_range(self) -> None:
        img = ImageBuffer.full(1, 1, 0.0)
        with pytest.raises(DomainError):
            to_display(img, value_range=(1.0, 1.0))
        with pytest.raises(DomainError):
            from_display(img, value_range=(2.0, 1.0))


class TestSidecar:
    """Tests for frame metadata."""

    def test_sidecar_path(self) -> None:
        assert sidecar_path(Path("out/frame_00001.pgm")) == Path("out/frame_00001.pgm.json")

    def test_affine_metadata(self) -> None:
        metadata = display_metadata(8, 255, (-4.0, 4.0), 0.01, seed=3)
        assert metadata == {
            "step": 8,
            "maxval": 255,
            "transform": {"kind": "affine", "from": [-4.0, 4.0], "to": [0, 255]},
            "clamped_fraction": 0.01,
            "seed": 3,
        }

    def test_identity_metadata(self) -> None:
        metadata = display_metadata(None, 255, None)
        assert metadata["step"] is None
        assert metadata["transform"] == {"kind": "identity"}

    def test_write_sidecar(self, tmp_path: Path) -> None:
        frame = tmp_path / "frame_00000.pgm"
        target = write_sidecar(frame, display_metadata(0, 255, None, beta=0.02))
        text = target.read_text(encoding="utf-8")
        assert target == tmp_path / "frame_00000.pgm.json"
        assert text.endswith("}\n")
        assert text.index('"beta"') < text.index('"step"')
        assert json.loads(text)["beta"] == 0.02
