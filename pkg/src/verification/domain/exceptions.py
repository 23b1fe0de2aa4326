"""
Domain exceptions for the verification bounded context.

Exception List:
    - VerificationError: Base class of this context
    - UnknownSuiteError: Suite name not among the registered gradient suites
    - InvalidCheckConfigError: Non-positive seed count, step or tolerance
"""

from src.shared.domain.exceptions import DomainError


class VerificationError(DomainError):
    """Base class for rule violations in the verification context."""


class UnknownSuiteError(VerificationError):
    def __init__(self, name: str, known: list[str]) -> None:
        self.name = name
        super().__init__(f"Unknown gradient suite {name!r}, expected one of {known}")


class InvalidCheckConfigError(VerificationError, ValueError):
    """Raised when a gradient check is configured with non-positive parameters."""
