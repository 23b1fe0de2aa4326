"""Dependency injection configuration for infrastructure layer."""
