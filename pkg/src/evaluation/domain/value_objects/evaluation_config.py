from dataclasses import dataclass

from src.evaluation.domain.exceptions import EvaluationError


@dataclass(frozen=True)
class EvaluationConfig:
    """
    Attributes:
        max_detections: Per image and class cap on ranked detections
    """

    max_detections: int = 100

    def __post_init__(self) -> None:
        if self.max_detections < 1:
            raise EvaluationError(f"max_detections must be >= 1, got {self.max_detections}")
