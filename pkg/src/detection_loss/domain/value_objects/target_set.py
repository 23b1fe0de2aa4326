from collections.abc import Sequence
from dataclasses import dataclass
from typing import Self

import numpy as np
from numpy.typing import NDArray

from src.detection_loss.domain.exceptions import InvalidTargetsError
from src.shared.domain.value_objects.annotation import Annotation


@dataclass(frozen=True, eq=False)
class TargetSet:
    """
    Training targets of one image in loss coordinates.

    Attributes:
        class_ids: T class ids
        boxes: T x 4 normalized (cx, cy, w, h)
        is_pseudo: T flags, True for CPG-generated targets
    """

    class_ids: NDArray[np.int64]
    boxes: NDArray[np.float64]
    is_pseudo: NDArray[np.bool_]

    def __post_init__(self) -> None:
        class_ids = np.array(self.class_ids, dtype=np.int64).reshape(-1)
        boxes = np.array(self.boxes, dtype=np.float64).reshape(-1, 4)
        is_pseudo = np.array(self.is_pseudo, dtype=np.bool_).reshape(-1)
        if not len(class_ids) == len(boxes) == len(is_pseudo):
            raise InvalidTargetsError(
                f"Targets disagree in length: {len(class_ids)} classes, {len(boxes)} boxes, "
                f"{len(is_pseudo)} flags"
            )
        if np.any(class_ids < 0):
            raise InvalidTargetsError("Target class ids must be non-negative")
        if np.any(boxes[:, 2:] <= 0) or not np.all(np.isfinite(boxes)):
            raise InvalidTargetsError("Target boxes must be finite with positive size")
        for array in (class_ids, boxes, is_pseudo):
            array.setflags(write=False)
        object.__setattr__(self, "class_ids", class_ids)
        object.__setattr__(self, "boxes", boxes)
        object.__setattr__(self, "is_pseudo", is_pseudo)

    @classmethod
    def empty(cls) -> Self:
        return cls(np.zeros(0, np.int64), np.zeros((0, 4)), np.zeros(0, np.bool_))

    @classmethod
    def from_annotations(
        cls, annotations: Sequence[Annotation], width: float, height: float
    ) -> Self:
        """
        Convert pixel annotations of one image to normalized center boxes.

        Ground truth and pseudo-labels may be mixed; order is preserved.
        """
        if not annotations:
            return cls.empty()
        return cls(
            class_ids=np.array([a.class_id for a in annotations], dtype=np.int64),
            boxes=np.array([a.bbox.to_normalized_cxcywh(width, height) for a in annotations]),
            is_pseudo=np.array([a.is_pseudo for a in annotations], dtype=np.bool_),
        )

    def __len__(self) -> int:
        return int(self.class_ids.size)

    def permuted(self, order: Sequence[int]) -> Self:
        index = list(order)
        return type(self)(self.class_ids[index], self.boxes[index], self.is_pseudo[index])
