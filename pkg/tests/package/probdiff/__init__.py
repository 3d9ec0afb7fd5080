"""Tests for the forward probabilistic diffusion."""
