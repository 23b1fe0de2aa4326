"""
Domain exceptions for the evaluation bounded context.

Exception List:
    - EvaluationError: Base class of this context
    - ClassNotInReportError: Class requested from a report that does not cover it
"""

from src.shared.domain.exceptions import DomainError


class EvaluationError(DomainError):
    """Base class for rule violations in the evaluation context."""


class ClassNotInReportError(EvaluationError):
    def __init__(self, class_id: int) -> None:
        self.class_id = class_id
        super().__init__(f"Class {class_id} is not covered by the report")
