from dataclasses import dataclass

from src.distillation.domain.exceptions import InvalidDistillationConfigError


@dataclass(frozen=True)
class StdConfig:
    """
    Topology distillation settings.

    Attributes:
        temperature: Softmax temperature of the affinity rows
        include_background_anchor: Append the image-level anchor as a node
        weight: Weight of the topology term in the total loss
    """

    temperature: float = 1.0
    include_background_anchor: bool = True
    weight: float = 3.0

    def __post_init__(self) -> None:
        if self.temperature <= 0:
            raise InvalidDistillationConfigError(
                f"Topology temperature must be positive, got {self.temperature}"
            )
        if self.weight < 0:
            raise InvalidDistillationConfigError(f"Topology weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class CrdConfig:
    """
    Response distillation settings.

    Attributes:
        temperature: Softmax temperature of the class responses
        bbox_l1_weight: L1 coefficient of the box term
        bbox_giou_weight: (1 - GIoU) coefficient of the box term
        tau_squared: Multiply the alignment term by temperature**2
    """

    temperature: float = 1.0
    bbox_l1_weight: float = 5.0
    bbox_giou_weight: float = 2.0
    tau_squared: bool = False

    def __post_init__(self) -> None:
        if self.temperature <= 0:
            raise InvalidDistillationConfigError(
                f"Response temperature must be positive, got {self.temperature}"
            )
        if self.bbox_l1_weight < 0 or self.bbox_giou_weight < 0:
            raise InvalidDistillationConfigError("Box loss weights must be >= 0")
