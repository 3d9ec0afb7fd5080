"""Tests for package-level metadata."""

from __future__ import annotations

import importlib
from importlib.metadata import PackageNotFoundError
from unittest.mock import patch

import scalespace_lab


def test_version_falls_back_when_metadata_missing() -> None:
    """__version__ degrades to 0.0.0 when the package isn't installed."""
    try:
        with patch(
            "importlib.metadata.version", side_effect=PackageNotFoundError("scalespace-lab")
        ):
            importlib.reload(scalespace_lab)
        assert scalespace_lab.__version__ == "0.0.0"
    finally:
        # Restore the real version so other tests see accurate metadata.
        importlib.reload(scalespace_lab)


def test_public_api() -> None:
    """The runners and their configurations are importable from the package root."""
    assert callable(scalespace_lab.run_probdiff)
    assert callable(scalespace_lab.run_osmosis)
    assert scalespace_lab.FpCompareConfig().samples == 100_000
    assert "ImageBuffer" in scalespace_lab.__all__
