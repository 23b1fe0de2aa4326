"""
Domain exceptions for the simulation bounded context.

Exception List:
    - SimulationError: Base class of this context
    - MissingTeacherError: Distillation or pseudo-label mode without a teacher
    - InvalidWorldConfigError: World settings that cannot produce a dataset
    - InvalidTrainConfigError: Optimiser or mode settings out of range
"""

from src.shared.domain.exceptions import DomainError


class SimulationError(DomainError):
    """Base class for rule violations in the simulation context."""


class MissingTeacherError(SimulationError):
    def __init__(self, mode: str) -> None:
        self.mode = mode
        super().__init__(f"Mode {mode!r} needs a frozen teacher from an earlier stage")


class InvalidWorldConfigError(SimulationError, ValueError):
    """Raised when a world config cannot produce a consistent synthetic dataset."""


class InvalidTrainConfigError(SimulationError, ValueError):
    """Raised when optimiser settings or the mode name are invalid."""
