"""
Query batch value object.

A QueryBatch couples the decoder output embeddings of a set of queries with
the detections those queries emitted (aligned by row), plus the optional
global image feature map used for the background anchor.
"""

from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Self

import numpy as np
from numpy.typing import NDArray

from src.shared.domain.exceptions import InvalidQueryBatchError
from src.shared.domain.value_objects.detection import Detection


def _frozen(array: NDArray[np.float64]) -> NDArray[np.float64]:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QueryBatch:
    """
    Query embeddings aligned with their detections.

    Attributes:
        features: N x D embeddings, row i belongs to detections[i]
        detections: N detections
        image_features: Optional H x W x D feature map of the image(s)

    Raises:
        InvalidQueryBatchError: On shape disagreement or duplicate query indices
    """

    features: NDArray[np.float64]
    detections: tuple[Detection, ...]
    image_features: NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise InvalidQueryBatchError(f"Features must be an N x D matrix, got {features.shape}")

        detections = tuple(self.detections)
        if features.shape[0] != len(detections):
            raise InvalidQueryBatchError(
                f"Feature rows ({features.shape[0]}) must equal detections ({len(detections)})"
            )

        keys = [(d.image_id, d.query_index) for d in detections]
        if len(set(keys)) != len(keys):
            raise InvalidQueryBatchError("Query indices must be unique within an image")

        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "detections", detections)

        if self.image_features is not None:
            image_features = np.array(self.image_features, dtype=np.float64)
            if image_features.ndim != 3 or image_features.shape[2] != features.shape[1]:
                raise InvalidQueryBatchError(
                    f"Image features must be H x W x {features.shape[1]}, "
                    f"got {image_features.shape}"
                )
            object.__setattr__(self, "image_features", _frozen(image_features))

    @property
    def num_queries(self) -> int:
        return int(self.features.shape[0])

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def areas(self) -> NDArray[np.float64]:
        return np.array([d.bbox.area for d in self.detections], dtype=np.float64)

    @property
    def scores(self) -> NDArray[np.float64]:
        return np.array([d.score for d in self.detections], dtype=np.float64)

    def with_features(
        self,
        features: NDArray[np.float64],
        image_features: NDArray[np.float64] | None = None,
    ) -> Self:
        """Same detections, different embeddings (e.g. the student's view)."""
        return replace(
            self,
            features=features,
            image_features=image_features if image_features is not None else self.image_features,
        )

    @classmethod
    def concatenate(cls, batches: Sequence["QueryBatch"]) -> "QueryBatch":
        """
        Stack several images' queries into one batch.

        Image feature maps are flattened to (H*W) x 1 x D and stacked, so the
        spatial mean of the result equals the mean over every position of
        every input map. The map is dropped if any input lacks one.
        """
        if not batches:
            raise InvalidQueryBatchError("Cannot concatenate an empty list of batches")

        features = np.concatenate([b.features for b in batches], axis=0)
        detections = tuple(d for b in batches for d in b.detections)

        maps = [b.image_features for b in batches]
        image_features = None
        if all(m is not None for m in maps):
            image_features = np.concatenate(
                [m.reshape(-1, 1, m.shape[2]) for m in maps if m is not None], axis=0
            )

        return cls(features=features, detections=detections, image_features=image_features)
