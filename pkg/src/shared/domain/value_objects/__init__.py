"""Shared value objects for domain layer."""
