from dataclasses import dataclass
from enum import StrEnum

from src.pseudo_label.domain.exceptions import InvalidCpgConfigError


class ThresholdStrategy(StrEnum):
    """How per-class thresholds are chosen."""

    CLUSTER = "cluster"
    FIXED = "fixed"


@dataclass(frozen=True)
class CpgConfig:
    """
    Settings of the clustering-driven pseudo-label generator.

    Attributes:
        delta_min: Candidate filter, only scores above it enter a bank
        capacity: Maximum scores kept per class bank (FIFO)
        theta_nms: IoU against ground truth at which a pseudo-label is dropped
        min_samples: Bank size below which clustering is not attempted
        fallback_threshold: Threshold used before a bank can be clustered
        strategy: cluster (per-class 2-means) or fixed (fallback_threshold everywhere)

    Raises:
        InvalidCpgConfigError: Unless 0 < delta_min < fallback_threshold < 1,
            0 < theta_nms <= 1, capacity >= 1 and min_samples >= 2
    """

    delta_min: float = 0.3
    capacity: int = 20000
    theta_nms: float = 0.7
    min_samples: int = 50
    fallback_threshold: float = 0.4
    strategy: ThresholdStrategy = ThresholdStrategy.CLUSTER

    def __post_init__(self) -> None:
        if not 0.0 < self.delta_min < self.fallback_threshold < 1.0:
            raise InvalidCpgConfigError(
                "Expected 0 < delta_min < fallback_threshold < 1, got "
                f"delta_min={self.delta_min}, fallback_threshold={self.fallback_threshold}"
            )
        if not 0.0 < self.theta_nms <= 1.0:
            raise InvalidCpgConfigError(f"theta_nms must lie in (0, 1], got {self.theta_nms}")
        if self.capacity < 1:
            raise InvalidCpgConfigError(f"capacity must be >= 1, got {self.capacity}")
        if self.min_samples < 2:
            raise InvalidCpgConfigError(f"min_samples must be >= 2, got {self.min_samples}")
        object.__setattr__(self, "strategy", ThresholdStrategy(self.strategy))
