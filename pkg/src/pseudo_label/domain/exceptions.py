"""
Domain exceptions for the pseudo-label bounded context.

Exception List:
    - PseudoLabelError: Base class of this context
    - InvalidCpgConfigError: Generator settings out of range
    - InvalidScoreBankError: Bank contents violate capacity or score bounds
    - MissingThresholdError: Old class without a threshold
"""

from src.shared.domain.exceptions import DomainError


class PseudoLabelError(DomainError):
    """Base class for rule violations in the pseudo-label context."""


class InvalidCpgConfigError(PseudoLabelError, ValueError):
    """Raised when CpgConfig values break 0 < delta_min < fallback < 1 or related bounds."""


class InvalidScoreBankError(PseudoLabelError, ValueError):
    """Raised when a score bank holds scores outside (delta_min, 1] or exceeds capacity."""


class MissingThresholdError(PseudoLabelError):
    """
    Raised when an old-class prediction has no threshold in the table.

    Attributes:
        class_id: Class without a threshold
    """

    def __init__(self, class_id: int) -> None:
        self.class_id = class_id
        super().__init__(f"No pseudo-label threshold for old class {class_id}")
