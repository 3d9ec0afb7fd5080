"""Tests for the built-in scene and input resolution."""

from __future__ import annotations

from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

from scalespace_lab.core.errors import DomainError, PnmFormatError
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.fileio.pnm import write_pnm
from scalespace_lab.fileio.testimage import (
    load_input_image,
    parse_synthetic_size,
    synthetic_scene,
)


class TestSyntheticScene:
    """Tests for synthetic_scene."""

    def test_integer_values_in_byte_range(self) -> None:
        scene = synthetic_scene(48, 32, 3)
        assert (scene.width, scene.height, scene.channels) == (48, 32, 3)
        assert scene.data.min() >= 0.0
        assert scene.data.max() <= 255.0
        assert np.array_equal(scene.data, np.round(scene.data))

    def test_deterministic_with_structure(self) -> None:
        first = synthetic_scene(40, 30)
        assert np.array_equal(first.data, synthetic_scene(40, 30).data)
        assert len(np.unique(first.data)) > 10

    def test_channels_differ(self) -> None:
        scene = synthetic_scene(20, 20, 3)
        assert not np.array_equal(scene.data[:, :, 0], scene.data[:, :, 1])

    def test_rejects_empty(self) -> None:
        with pytest.raises(DomainError):
            synthetic_scene(0, 4)


class TestInputResolution:
    """Tests for parse_synthetic_size and load_input_image."""

    @pytest.mark.parametrize(
        ("text", "expected"), [("481x321", (481, 321, 1)), ("8x6x3", (8, 6, 3))]
    )
    def test_parse_synthetic_size(self, text: str, expected: tuple[int, int, int]) -> None:
        assert parse_synthetic_size(text) == expected

    @pytest.mark.parametrize("text", ["", "8", "8x", "x6", "8x6x", "-8x6", "8 x 6"])
    def test_rejects_malformed_size(self, text: str) -> None:
        with pytest.raises(DomainError, match="WxH"):
            parse_synthetic_size(text)

    def test_loads_synthetic(self) -> None:
        img, maxval = load_input_image("synthetic:16x12x3")
        assert (img.width, img.height, img.channels) == (16, 12, 3)
        assert maxval == 255

    def test_loads_file_with_its_maxval(self, tmp_path: Path) -> None:
        path = tmp_path / "input.pgm"
        write_pnm(ImageBuffer(np.array([[0.0, 700.0]])), path, maxval=1023)
        img, maxval = load_input_image(str(path))
        assert maxval == 1023
        assert img.flat.tolist() == [0.0, 700.0]

    def test_reads_file_once(self, tmp_path: Path) -> None:
        path = tmp_path / "input.pgm"
        write_pnm(ImageBuffer(np.array([[3.0, 9.0]])), path, maxval=15)
        with patch.object(Path, "read_bytes", autospec=True, side_effect=Path.read_bytes) as read:
            img, maxval = load_input_image(str(path))
        assert read.call_count == 1
        assert maxval == 15
        assert img.flat.tolist() == [3.0, 9.0]

    def test_missing_and_malformed_files(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            load_input_image(str(tmp_path / "missing.pgm"))
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"not an image")
        with pytest.raises(PnmFormatError):
            load_input_image(str(bad))
