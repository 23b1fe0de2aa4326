import math
from dataclasses import dataclass

from src.shared.domain.exceptions import InvalidDetectionError
from src.shared.domain.value_objects.bbox import BBox


@dataclass(frozen=True)
class Detection:
    """
    One object prediction emitted by a detector query.

    Attributes:
        bbox: Predicted box (pixels)
        score: Confidence in [0, 1]
        class_id: Predicted category id (>= 0)
        query_index: Index of the emitting query, unique within one image
        image_id: Owning image when the detection travels in a stream

    Raises:
        InvalidDetectionError: If score, class_id or query_index is out of range
    """

    bbox: BBox
    score: float
    class_id: int
    query_index: int = 0
    image_id: int | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.score) or not 0.0 <= self.score <= 1.0:
            raise InvalidDetectionError(f"Detection score must lie in [0, 1], got {self.score}")

        if self.class_id < 0:
            raise InvalidDetectionError(f"Class id must be non-negative, got {self.class_id}")

        if self.query_index < 0:
            raise InvalidDetectionError(
                f"Query index must be non-negative, got {self.query_index}"
            )
