"""Tests for the published Python package."""
