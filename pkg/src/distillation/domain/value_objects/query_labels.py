from collections.abc import Sequence
from dataclasses import dataclass
from typing import Self

import numpy as np
from numpy.typing import NDArray

from src.distillation.domain.exceptions import InvalidLabelsError

UNLABELED = -1


@dataclass(frozen=True, eq=False)
class QueryLabels:
    """
    Per-query class assignment with confidence, shared by teacher and student.

    Built from the teacher's pseudo-label assignment: a query either carries
    an old class id and the teacher's score, or is UNLABELED and takes no
    part in prototype aggregation.

    Attributes:
        class_ids: N ints, UNLABELED (-1) for queries without a label
        scores: N confidences in [0, 1]

    Raises:
        InvalidLabelsError: On length mismatch, scores outside [0, 1] or
            class ids below -1
    """

    class_ids: NDArray[np.int64]
    scores: NDArray[np.float64]

    def __post_init__(self) -> None:
        class_ids = np.array(self.class_ids, dtype=np.int64).reshape(-1)
        scores = np.array(self.scores, dtype=np.float64).reshape(-1)
        if class_ids.shape != scores.shape:
            raise InvalidLabelsError(
                f"Class ids ({class_ids.size}) and scores ({scores.size}) must align"
            )
        if np.any(class_ids < UNLABELED):
            raise InvalidLabelsError("Class ids must be non-negative or UNLABELED")
        if not np.all(np.isfinite(scores)) or np.any((scores < 0) | (scores > 1)):
            raise InvalidLabelsError("Scores must lie in [0, 1]")
        class_ids.setflags(write=False)
        scores.setflags(write=False)
        object.__setattr__(self, "class_ids", class_ids)
        object.__setattr__(self, "scores", scores)

    @classmethod
    def unlabeled(cls, size: int) -> Self:
        return cls(np.full(size, UNLABELED, dtype=np.int64), np.zeros(size, dtype=np.float64))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, float]]) -> Self:
        return cls(
            np.array([c for c, _ in pairs], dtype=np.int64),
            np.array([s for _, s in pairs], dtype=np.float64),
        )

    def __len__(self) -> int:
        return int(self.class_ids.size)

    @property
    def labeled_classes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unique(self.class_ids) if c != UNLABELED)
