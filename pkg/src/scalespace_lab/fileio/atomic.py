"""Atomic file replacement for every laboratory output."""

from __future__ import annotations

import os
import tempfile
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path


@contextmanager
def atomic_target(output_path: Path) -> Iterator[Path]:
    """Yield a temporary path next to ``output_path`` and move it into place on success.

    The temporary file lives in the destination directory, so the final
    ``replace`` is atomic and a crash mid-write never leaves a truncated
    target behind. The temporary file is removed if the body fails.

    Args:
        output_path: Final path of the file

    Yields:
        Path the caller writes the complete content to
    """
    output_path.parent.mkdir(parents=True, exist_ok=True)
    tmp_fd, tmp_name = tempfile.mkstemp(
        prefix=f".{output_path.stem}-",
        suffix=output_path.suffix,
        dir=output_path.parent,
    )
    os.close(tmp_fd)
    tmp_path = Path(tmp_name)
    try:
        yield tmp_path
        tmp_path.replace(output_path)
    except BaseException:
        tmp_path.unlink(missing_ok=True)
        raise


def write_bytes_atomic(output_path: Path, payload: bytes) -> None:
    """Write ``payload`` to ``output_path`` atomically."""
    with atomic_target(output_path) as tmp_path:
        tmp_path.write_bytes(payload)


def write_text_atomic(output_path: Path, text: str) -> None:
    """Write UTF-8 ``text`` with LF line endings to ``output_path`` atomically."""
    with atomic_target(output_path) as tmp_path:
        with tmp_path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
