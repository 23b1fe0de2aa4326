from dataclasses import dataclass

from src.detection_loss.domain.exceptions import DetectionLossError


@dataclass(frozen=True)
class SetLossConfig:
    """
    Matching costs and detection loss weights.

    Attributes:
        focal_alpha: Positive-class weight of the sigmoid focal term
        focal_gamma: Focusing exponent of the sigmoid focal term
        cost_class: Weight of the classification cost in matching
        cost_bbox: Weight of the L1 box cost in matching
        cost_giou: Weight of the -GIoU cost in matching
        bbox_l1_weight: L1 coefficient of the box loss
        bbox_giou_weight: (1 - GIoU) coefficient of the box loss
        pseudo_weight: Loss weight of queries matched to pseudo-labels
        lambda1: Weight of the topology term in the total loss
    """

    focal_alpha: float = 0.25
    focal_gamma: float = 2.0
    cost_class: float = 2.0
    cost_bbox: float = 5.0
    cost_giou: float = 2.0
    bbox_l1_weight: float = 5.0
    bbox_giou_weight: float = 2.0
    pseudo_weight: float = 1.0
    lambda1: float = 3.0

    def __post_init__(self) -> None:
        if not 0.0 < self.focal_alpha < 1.0:
            raise DetectionLossError(f"focal_alpha must lie in (0, 1), got {self.focal_alpha}")
        weights = (
            self.focal_gamma,
            self.cost_class,
            self.cost_bbox,
            self.cost_giou,
            self.bbox_l1_weight,
            self.bbox_giou_weight,
            self.pseudo_weight,
            self.lambda1,
        )
        if any(w < 0 for w in weights):
            raise DetectionLossError("Loss and cost weights must be non-negative")
