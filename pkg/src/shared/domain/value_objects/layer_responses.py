from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.shared.domain.exceptions import LayerMismatchError


@dataclass(frozen=True, eq=False)
class LayerResponses:
    """
    Classification and box outputs of one decoder layer for N queries.

    Query i of a teacher layer corresponds to query i of the student layer
    with the same layer_index.

    Attributes:
        logits: N x C class scores (pre-activation)
        boxes: N x 4 normalized (cx, cy, w, h)
        layer_index: Position of the layer, 0-based
    """

    logits: NDArray[np.float64]
    boxes: NDArray[np.float64]
    layer_index: int = 0

    def __post_init__(self) -> None:
        logits = np.array(self.logits, dtype=np.float64)
        boxes = np.array(self.boxes, dtype=np.float64)
        if logits.ndim != 2:
            raise LayerMismatchError(f"Logits must be N x C, got {logits.shape}")
        if boxes.shape != (logits.shape[0], 4):
            raise LayerMismatchError(
                f"Boxes must be {logits.shape[0]} x 4 to match the logits, got {boxes.shape}"
            )
        if self.layer_index < 0:
            raise LayerMismatchError(f"Layer index must be >= 0, got {self.layer_index}")
        logits.setflags(write=False)
        boxes.setflags(write=False)
        object.__setattr__(self, "logits", logits)
        object.__setattr__(self, "boxes", boxes)

    @property
    def num_queries(self) -> int:
        return int(self.logits.shape[0])

    @property
    def num_classes(self) -> int:
        return int(self.logits.shape[1])

    def check_aligned(self, other: "LayerResponses") -> None:
        """Raise LayerMismatchError unless both layers have identical shapes."""
        if self.logits.shape != other.logits.shape:
            raise LayerMismatchError(
                f"Layer {self.layer_index}: logits {self.logits.shape} vs {other.logits.shape}"
            )
