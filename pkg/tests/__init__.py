"""Tests package for scalespace_lab."""
