"""Tests for shared package primitives."""
