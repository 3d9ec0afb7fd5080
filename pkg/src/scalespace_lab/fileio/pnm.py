"""Netpbm grey and colour images (P2, P3, P5, P6).

Binary rasters use one byte per sample for ``maxval < 256`` and two
big-endian bytes otherwise. The writer always emits the binary variants
with a canonical header ``P5\\n<w> <h>\\n<maxval>\\n``, so reading a
canonical binary file and writing it back with the same maxval reproduces
it byte for byte.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
import numpy.typing as npt

from scalespace_lab.core.errors import PnmFormatError, ShapeMismatchError
from scalespace_lab.core.limits import DEFAULT_MAXVAL
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.fileio.atomic import write_bytes_atomic

if TYPE_CHECKING:
    from pathlib import Path

LOG = logging.getLogger(__name__)

MAX_MAXVAL = 65535

_CHANNELS = {b"P2": 1, b"P3": 3, b"P5": 1, b"P6": 3}
_PLAIN = {b"P2", b"P3"}
_WHITESPACE = b" \t\n\r\v\f"
_COMMENT = re.compile(rb"#[^\n\r]*")


@dataclass(frozen=True, slots=True)
class PnmHeader:
    """Parsed PNM header.

    Attributes:
        magic: Format tag, one of ``P2``, ``P3``, ``P5``, ``P6``
        width: Image width
        height: Image height
        maxval: Largest sample value
        offset: Byte offset of the raster
    """

    magic: str
    width: int
    height: int
    maxval: int
    offset: int

    @property
    def channels(self) -> int:
        """Return 1 for grey formats and 3 for colour formats."""
        return _CHANNELS[self.magic.encode("ascii")]

    @property
    def plain(self) -> bool:
        """Return whether the raster is ASCII."""
        return self.magic.encode("ascii") in _PLAIN

    @property
    def sample_count(self) -> int:
        """Return the number of samples in the raster."""
        return self.width * self.height * self.channels


def _parse_header(data: bytes) -> PnmHeader:
    magic = data[:2]
    if magic not in _CHANNELS:
        raise PnmFormatError(f"Unsupported PNM magic {magic!r}")
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        if pos >= len(data):
            raise PnmFormatError("Truncated PNM header")
        byte = data[pos : pos + 1]
        if byte in _WHITESPACE:
            pos += 1
            continue
        if byte == b"#":
            end = _COMMENT.match(data, pos)
            pos = end.end() if end else len(data)
            continue
        start = pos
        while pos < len(data) and data[pos : pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise PnmFormatError(f"Unexpected byte {byte!r} in PNM header at offset {start}")
        fields.append(int(data[start:pos]))
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise PnmFormatError("PNM header must end with a single whitespace byte")
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PnmFormatError(f"Invalid PNM dimensions {width}x{height}")
    if not 0 < maxval <= MAX_MAXVAL:
        raise PnmFormatError(f"Unsupported PNM maxval {maxval}")
    return PnmHeader(
        magic=magic.decode("ascii"),
        width=width,
        height=height,
        maxval=maxval,
        offset=pos + 1,
    )


def read_pnm_header(path: Path) -> PnmHeader:
    """Read only the header of a PNM file.

    Raises:
        PnmFormatError: If the header is malformed or unsupported
    """
    return _parse_header(path.read_bytes())


def _plain_samples(raster: bytes, header: PnmHeader) -> npt.NDArray[Any]:
    tokens = _COMMENT.sub(b" ", raster).split()
    if len(tokens) < header.sample_count:
        raise PnmFormatError(
            f"Truncated PNM raster: expected {header.sample_count} samples, got {len(tokens)}"
        )
    try:
        samples = np.array([int(token) for token in tokens[: header.sample_count]])
    except ValueError as exc:
        raise PnmFormatError("Non-numeric sample in plain PNM raster") from exc
    return samples


def _binary_samples(raster: bytes, header: PnmHeader) -> npt.NDArray[Any]:
    dtype = np.dtype(np.uint8) if header.maxval < 256 else np.dtype(">u2")
    expected = header.sample_count * dtype.itemsize
    if len(raster) < expected:
        raise PnmFormatError(f"Truncated PNM raster: expected {expected} bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=dtype, count=header.sample_count)


def decode_pnm(data: bytes) -> tuple[ImageBuffer, PnmHeader]:
    """Decode PNM bytes into an image with values in ``[0, maxval]`` and its header.

    Raises:
        PnmFormatError: If the data is malformed, truncated or has samples
            above maxval
    """
    header = _parse_header(data)
    raster = data[header.offset :]
    samples = _plain_samples(raster, header) if header.plain else _binary_samples(raster, header)
    if samples.size and int(samples.max()) > header.maxval:
        raise PnmFormatError(f"Sample exceeds maxval {header.maxval}")
    LOG.debug("Read %s %dx%d maxval %d", header.magic, header.width, header.height, header.maxval)
    img = ImageBuffer.from_flat(
        samples.astype(np.float64),
        header.width,
        header.height,
        header.channels,
    )
    return img, header


def read_pnm(path: Path) -> ImageBuffer:
    """Read a PNM file into an image with values in ``[0, maxval]``.

    Raises:
        PnmFormatError: If the file is malformed, truncated or has samples
            above maxval
    """
    img, _ = decode_pnm(path.read_bytes())
    return img


def encode_pnm(img: ImageBuffer, maxval: int = DEFAULT_MAXVAL) -> tuple[bytes, float]:
    """Encode an image as binary PNM and return the bytes and the clamped fraction.

    Values are rounded half up and clamped to ``[0, maxval]``.

    Raises:
        ShapeMismatchError: If the image has neither 1 nor 3 channels
        PnmFormatError: If maxval is outside ``1..65535``
    """
    if img.channels not in (1, 3):
        raise ShapeMismatchError(f"PNM holds 1 or 3 channels, got {img.channels}")
    if not 0 < maxval <= MAX_MAXVAL:
        raise PnmFormatError(f"Unsupported PNM maxval {maxval}")
    rounded = np.floor(img.data + 0.5)
    outside = np.count_nonzero((rounded < 0) | (rounded > maxval))
    dtype = np.dtype(np.uint8) if maxval < 256 else np.dtype(">u2")
    samples = np.clip(rounded, 0, maxval).astype(dtype)
    magic = "P5" if img.channels == 1 else "P6"
    header = f"{magic}\n{img.width} {img.height}\n{maxval}\n".encode("ascii")
    return header + samples.tobytes(), outside / img.size


def write_pnm(img: ImageBuffer, path: Path, maxval: int = DEFAULT_MAXVAL) -> float:
    """Write an image as P5 (grey) or P6 (colour) and return the clamped fraction.

    Raises:
        ShapeMismatchError: If the image has neither 1 nor 3 channels
        PnmFormatError: If maxval is outside ``1..65535``
        OSError: If the file cannot be written
    """
    payload, clamped = encode_pnm(img, maxval)
    write_bytes_atomic(path, payload)
    if clamped > 0.0:
        LOG.warning("Clamped %.3f%% of samples writing %s", 100.0 * clamped, path)
    return clamped
