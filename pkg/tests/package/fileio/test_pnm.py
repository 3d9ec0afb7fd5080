"""Tests for PNM reading and writing."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pytest

from scalespace_lab.core.errors import PnmFormatError, ShapeMismatchError
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.fileio.pnm import (
    decode_pnm,
    encode_pnm,
    read_pnm,
    read_pnm_header,
    write_pnm,
)


def _write(tmp_path: Path, payload: bytes, name: str = "image.pnm") -> Path:
    path = tmp_path / name
    path.write_bytes(payload)
    return path


class TestReadPnm:
    """Tests for read_pnm and read_pnm_header."""

    def test_binary_grey(self, tmp_path: Path) -> None:
        path = _write(tmp_path, b"P5\n3 2\n255\n" + bytes([0, 1, 2, 253, 254, 255]))
        img = read_pnm(path)
        assert (img.width, img.height, img.channels) == (3, 2, 1)
        assert img.flat.tolist() == [0.0, 1.0, 2.0, 253.0, 254.0, 255.0]

    def test_binary_colour_sixteen_bit(self, tmp_path: Path) -> None:
        raster = np.array([0, 1, 256, 1000, 65535, 7], dtype=">u2").tobytes()
        path = _write(tmp_path, b"P6\n2 1\n65535\n" + raster)
        img = read_pnm(path)
        assert img.channels == 3
        assert img.data[0, 1].tolist() == [1000.0, 65535.0, 7.0]

    def test_plain_with_comments(self, tmp_path: Path) -> None:
        path = _write(tmp_path, b"P2\n# made by hand\n2 2 # size\n15\n0 5\n# row\n10 15\n")
        assert read_pnm(path).flat.tolist() == [0.0, 5.0, 10.0, 15.0]

    def test_header_fields(self, tmp_path: Path) -> None:
        path = _write(tmp_path, b"P5 # tag\n4\t2\n1023\n" + bytes(16))
        header = read_pnm_header(path)
        assert (header.magic, header.width, header.height, header.maxval) == ("P5", 4, 2, 1023)
        assert header.offset == len(b"P5 # tag\n4\t2\n1023\n")
        assert header.channels == 1
        assert not header.plain
        assert header.sample_count == 8

    def test_decode_returns_image_and_header(self) -> None:
        img, header = decode_pnm(b"P2\n2 1\n1023\n7 1023\n")
        assert img.flat.tolist() == [7.0, 1023.0]
        assert header.maxval == 1023
        assert header.plain

    def test_canonical_binary_round_trip(self, tmp_path: Path) -> None:
        payload = b"P5\n4 3\n255\n" + bytes(range(0, 240, 20))
        path = _write(tmp_path, payload)
        encoded, clamped = encode_pnm(read_pnm(path), 255)
        assert encoded == payload
        assert clamped == 0.0

    @pytest.mark.parametrize(
        ("payload", "message"),
        [
            (b"P4\n1 1\n\x00", "Unsupported PNM magic"),
            (b"P5\n1 1", "Truncated PNM header"),
            (b"P5\n1 1\n255", "single whitespace"),
            (b"P5\n0 1\n255\n", "Invalid PNM dimensions"),
            (b"P5\n1 1\n0\n\x00", "Unsupported PNM maxval"),
            (b"P5\n1 1\n70000\n\x00\x00", "Unsupported PNM maxval"),
            (b"P5\n1 x\n255\n", "Unexpected byte"),
            (b"P5\n2 2\n255\n\x00\x00", "Truncated PNM raster"),
            (b"P2\n2 1\n255\n1\n", "Truncated PNM raster"),
            (b"P2\n2 1\n255\n1 a\n", "Non-numeric"),
            (b"P2\n1 1\n255\n300\n", "exceeds maxval"),
            (b"P5\n1 1\n100\n\xc8", "exceeds maxval"),
        ],
    )
    def test_rejects_malformed(self, tmp_path: Path, payload: bytes, message: str) -> None:
        with pytest.raises(PnmFormatError, match=message):
            read_pnm(_write(tmp_path, payload))


class TestEncodePnm:
    """Tests for encode_pnm and write_pnm."""

    def test_rounds_half_up_and_clamps(self) -> None:
        img = ImageBuffer(np.array([[0.5, 1.49, 2.5, -0.4, -0.6, 300.0]]))
        payload, clamped = encode_pnm(img, 255)
        assert payload == b"P5\n6 1\n255\n" + bytes([1, 1, 3, 0, 0, 255])
        assert clamped == pytest.approx(2 / 6)

    def test_colour_header_and_wide_samples(self) -> None:
        img = ImageBuffer(np.array([[[1.0, 2.0, 300.0]]]))
        payload, _ = encode_pnm(img, 1023)
        assert payload == b"P6\n1 1\n1023\n" + np.array([1, 2, 300], dtype=">u2").tobytes()

    def test_rejects_unsupported_images(self) -> None:
        with pytest.raises(ShapeMismatchError):
            encode_pnm(ImageBuffer.full(2, 2, 0.0, channels=2))
        with pytest.raises(PnmFormatError):
            encode_pnm(ImageBuffer.full(2, 2, 0.0), maxval=0)

    def test_write_pnm_warns_on_clamping(
        self, tmp_path: Path, caplog: pytest.LogCaptureFixture
    ) -> None:
        path = tmp_path / "out" / "frame.pgm"
        with caplog.at_level(logging.WARNING):
            clamped = write_pnm(ImageBuffer(np.array([[-5.0, 10.0]])), path)
        assert clamped == 0.5
        assert "Clamped 50.000%" in caplog.text
        assert read_pnm(path).flat.tolist() == [0.0, 10.0]
        assert sorted(p.name for p in path.parent.iterdir()) == ["frame.pgm"]

    def test_write_then_read(self, tmp_path: Path) -> None:
        img = ImageBuffer(np.arange(24, dtype=np.float64).reshape(2, 4, 3) * 10.0)
        path = tmp_path / "frame.ppm"
        assert write_pnm(img, path) == 0.0
        assert np.array_equal(read_pnm(path).data, img.data)
