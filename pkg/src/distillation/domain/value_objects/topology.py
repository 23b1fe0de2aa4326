"""
Prototype, background anchor and relation topology value objects.

A topology lives in one scale bucket. Its nodes are the class prototypes of
that bucket in ascending class id order, optionally followed by the
background anchor (node id BACKGROUND_NODE).
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.distillation.domain.exceptions import DistillationError
from src.shared.domain.value_objects.scale import ScaleBucket

BACKGROUND_NODE = -1


def _readonly(array: NDArray[np.float64]) -> NDArray[np.float64]:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Prototype:
    """
    Confidence-weighted centroid of one class's query features in one bucket.

    Attributes:
        class_id: Class the prototype summarises
        bucket: Scale subspace
        vector: D-dim centroid
        support: Number of contributing queries (>= 1)
    """

    class_id: int
    bucket: ScaleBucket
    vector: NDArray[np.float64]
    support: int

    def __post_init__(self) -> None:
        vector = np.array(self.vector, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(vector)):
            raise DistillationError(f"Prototype of class {self.class_id} is not finite")
        if self.support < 1:
            raise DistillationError(f"Prototype support must be >= 1, got {self.support}")
        object.__setattr__(self, "vector", _readonly(vector))


@dataclass(frozen=True, eq=False)
class BackgroundAnchor:
    """Spatial mean of an image feature map; a static node of every bucket's topology."""

    vector: NDArray[np.float64]

    def __post_init__(self) -> None:
        vector = np.array(self.vector, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(vector)):
            raise DistillationError("Background anchor is not finite")
        object.__setattr__(self, "vector", _readonly(vector))


@dataclass(frozen=True, eq=False)
class RelationTopology:
    """
    Pairwise structure of the prototypes of one bucket.

    Attributes:
        bucket: Scale subspace
        node_ids: Class ids in ascending order, then BACKGROUND_NODE if present
        distance_matrix: Pairwise Euclidean distances (symmetric, zero diagonal)
        affinity: Row-wise softmax of -distance / temperature, diagonal included
        temperature: Softmax temperature (> 0)
    """

    bucket: ScaleBucket
    node_ids: tuple[int, ...]
    distance_matrix: NDArray[np.float64]
    affinity: NDArray[np.float64]
    temperature: float

    def __post_init__(self) -> None:
        n = len(self.node_ids)
        for name in ("distance_matrix", "affinity"):
            matrix = np.array(getattr(self, name), dtype=np.float64)
            if matrix.shape != (n, n):
                raise DistillationError(f"{name} must be {n} x {n}, got {matrix.shape}")
            object.__setattr__(self, name, _readonly(matrix))

    @property
    def size(self) -> int:
        return len(self.node_ids)

    @property
    def has_background(self) -> bool:
        return bool(self.node_ids) and self.node_ids[-1] == BACKGROUND_NODE
