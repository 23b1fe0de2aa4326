from dataclasses import dataclass

from src.shared.domain.exceptions import InvalidDetectionError
from src.shared.domain.value_objects.bbox import BBox


@dataclass(frozen=True)
class Annotation:
    """
    Labeled object instance, either human-annotated or CPG-generated.

    Attributes:
        image_id: Owning image
        bbox: Instance box (pixels)
        class_id: Category id
        is_pseudo: True when the label was produced from teacher predictions
        score: Teacher confidence for pseudo-labels, None for ground truth
        annotation_id: COCO annotation id, None until persisted
    """

    image_id: int
    bbox: BBox
    class_id: int
    is_pseudo: bool = False
    score: float | None = None
    annotation_id: int | None = None

    def __post_init__(self) -> None:
        if self.class_id < 0:
            raise InvalidDetectionError(f"Class id must be non-negative, got {self.class_id}")
