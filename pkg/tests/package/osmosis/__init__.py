"""Tests for osmosis filtering."""
