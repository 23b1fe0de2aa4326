"""
Domain exceptions for the benchmark bounded context.

Exception List:
    - BenchmarkError: Base class of this context
    - InvalidScheduleError: Empty stages, overlapping stages or unparsable schedule file
    - UnknownStageError: Stage index outside 1..n
    - AmbiguousCategoryError: A class name matches several categories
"""

from src.shared.domain.exceptions import DomainError


class BenchmarkError(DomainError):
    """Base class for rule violations in the benchmark context."""


class InvalidScheduleError(BenchmarkError, ValueError):
    """Raised when a task schedule breaks disjointness or has an empty stage."""


class UnknownStageError(BenchmarkError, ValueError):
    """
    Raised when a stage index is outside the schedule.

    Attributes:
        stage: Requested 1-based stage
        num_stages: Stages in the schedule
    """

    def __init__(self, stage: int, num_stages: int) -> None:
        self.stage = stage
        self.num_stages = num_stages
        super().__init__(f"Stage {stage} is outside 1..{num_stages}")


class AmbiguousCategoryError(BenchmarkError):
    """Raised when a class name resolves to more than one category."""

    def __init__(self, name: str, candidates: list[str]) -> None:
        self.name = name
        self.candidates = candidates
        super().__init__(f"Class name {name!r} is ambiguous: {', '.join(candidates)}")
