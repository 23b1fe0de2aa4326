"""Integration tests for shared infrastructure layer."""
