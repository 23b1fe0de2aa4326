"""Integration tests for shared bounded context."""
