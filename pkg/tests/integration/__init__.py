"""Package-level integration tests."""
