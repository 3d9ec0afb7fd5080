"""Tests for image, metadata and metric files."""
