"""Image files, metric logs and output writing."""

from __future__ import annotations

from scalespace_lab.fileio.atomic import atomic_target, write_bytes_atomic, write_text_atomic
from scalespace_lab.fileio.display import (
    display_metadata,
    from_display,
    sidecar_path,
    to_display,
    write_sidecar,
)
from scalespace_lab.fileio.excel import format_metric_worksheet
from scalespace_lab.fileio.metrics import MetricLog
from scalespace_lab.fileio.pnm import (
    PnmHeader,
    decode_pnm,
    encode_pnm,
    read_pnm,
    read_pnm_header,
    write_pnm,
)
from scalespace_lab.fileio.testimage import load_input_image, synthetic_scene

__all__ = [
    "MetricLog",
    "PnmHeader",
    "atomic_target",
    "decode_pnm",
    "display_metadata",
    "encode_pnm",
    "format_metric_worksheet",
    "from_display",
    "load_input_image",
    "read_pnm",
    "read_pnm_header",
    "sidecar_path",
    "synthetic_scene",
    "to_display",
    "write_bytes_atomic",
    "write_pnm",
    "write_sidecar",
    "write_text_atomic",
]
