"""Shared entities for domain layer."""
