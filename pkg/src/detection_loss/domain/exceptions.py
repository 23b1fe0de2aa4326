"""
Domain exceptions for the detection loss bounded context.

Exception List:
    - DetectionLossError: Base class of this context
    - TooManyTargetsError: More targets than queries, no complete matching exists
    - StaleMatchError: Match computed for a different prediction/target shape
    - InvalidTargetsError: Target classes or boxes out of range
    - InvalidLossComponentError: Non-finite loss component
"""

from src.shared.domain.exceptions import DomainError


class DetectionLossError(DomainError):
    """Base class for rule violations in the detection loss context."""


class TooManyTargetsError(DetectionLossError, ValueError):
    """
    Raised when an image has more targets than queries.

    Attributes:
        num_queries: Available queries
        num_targets: Targets to match
    """

    def __init__(self, num_queries: int, num_targets: int) -> None:
        self.num_queries = num_queries
        self.num_targets = num_targets
        super().__init__(f"Cannot match {num_targets} targets with only {num_queries} queries")


class StaleMatchError(DetectionLossError):
    """Raised when a MatchResult does not belong to the predictions and targets at hand."""


class InvalidTargetsError(DetectionLossError, ValueError):
    """Raised when target class ids exceed the logit columns or boxes are malformed."""


class InvalidLossComponentError(DetectionLossError, ValueError):
    """Raised when a loss component handed to total_loss() is not finite."""
