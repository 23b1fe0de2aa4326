from dataclasses import dataclass
from enum import Enum

from src.shared.domain.exceptions import InvalidScaleConfigError


class ScaleBucket(Enum):
    """Scale subspace of an instance, keyed by box area."""

    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


@dataclass(frozen=True)
class ScaleConfig:
    """
    Area thresholds separating the small, medium and large subspaces.

    The defaults coincide with the COCO area ranges 32^2 and 96^2, so the
    same object serves instance partitioning and scale-stratified AP.

    Attributes:
        tau_s: Lower bound of Medium (pixels^2)
        tau_m: Lower bound of Large (pixels^2)
    """

    tau_s: float = 1024.0
    tau_m: float = 9216.0

    def __post_init__(self) -> None:
        if not 0 < self.tau_s < self.tau_m:
            raise InvalidScaleConfigError(
                f"Scale thresholds must satisfy 0 < tau_s < tau_m, got ({self.tau_s}, {self.tau_m})"
            )

    def bucket_of(self, area: float) -> ScaleBucket:
        """Small below tau_s, Medium on [tau_s, tau_m), Large from tau_m up."""
        if area < self.tau_s:
            return ScaleBucket.SMALL
        if area < self.tau_m:
            return ScaleBucket.MEDIUM
        return ScaleBucket.LARGE
