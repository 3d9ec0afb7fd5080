"""Tests for the experiment runners."""
