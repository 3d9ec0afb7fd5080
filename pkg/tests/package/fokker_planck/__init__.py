"""Tests for the one-dimensional drift-diffusion equations."""
