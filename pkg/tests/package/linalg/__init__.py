"""Tests for sparse storage and the iterative solver."""
