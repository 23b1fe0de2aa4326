"""
Linear detection head trained by the simulator.

    h      = F A^T                        adapted query features (N x D)
    logits = h W^T + b                    (N x C)
    deltas = h Wb^T + bb                  (N x 4)
    boxes  = (rcx + d0 * rw, rcy + d1 * rh, rw * exp(d2), rh * exp(d3))

where (rcx, rcy, rw, rh) are the query reference boxes. The adapter A starts
at the identity; it is the only path through which topology distillation
moves the classifier's view of the features.
"""

import copy
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

PARAMETER_NAMES = ("W", "b", "Wb", "bb", "A")
PRIOR_PROBABILITY = 0.01
_MAX_LOG_SCALE = 4.0


@dataclass(frozen=True, eq=False)
class HeadOutput:
    """
    Attributes:
        adapted: N x D adapted features h
        logits: N x C class logits
        deltas: N x 4 raw box offsets, size offsets clipped
        boxes: N x 4 normalized (cx, cy, w, h)
        clipped: N x 4 True where a size offset hit the clip range
    """

    adapted: FloatArray
    logits: FloatArray
    deltas: FloatArray
    boxes: FloatArray
    clipped: NDArray[np.bool_]


class StudentHead:
    """
    Mutable parameters of the simulated detector head.

    A frozen copy (see frozen_copy) serves as the teacher of the next stage;
    its arrays are write-protected.
    """

    def __init__(self, params: dict[str, FloatArray], frozen: bool = False) -> None:
        missing = set(PARAMETER_NAMES) - set(params)
        if missing:
            raise ValueError(f"Missing head parameters: {sorted(missing)}")
        self._params = {name: np.array(params[name], dtype=np.float64) for name in PARAMETER_NAMES}
        self._frozen = frozen
        if frozen:
            for array in self._params.values():
                array.setflags(write=False)

    @classmethod
    def initial(cls, num_classes: int, feature_dim: int, seed: int) -> "StudentHead":
        """Small random classifier, zero box offsets, identity adapter."""
        rng = np.random.default_rng([seed, num_classes, feature_dim])
        bias = -math.log((1.0 - PRIOR_PROBABILITY) / PRIOR_PROBABILITY)
        return cls(
            {
                "W": 0.01 * rng.normal(size=(num_classes, feature_dim)),
                "b": np.full(num_classes, bias),
                "Wb": np.zeros((4, feature_dim)),
                "bb": np.zeros(4),
                "A": np.eye(feature_dim),
            }
        )

    @property
    def params(self) -> dict[str, FloatArray]:
        return self._params

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def num_classes(self) -> int:
        return int(self._params["W"].shape[0])

    @property
    def feature_dim(self) -> int:
        return int(self._params["W"].shape[1])

    def frozen_copy(self) -> "StudentHead":
        return StudentHead(copy.deepcopy(self._params), frozen=True)

    def trainable_copy(self) -> "StudentHead":
        return StudentHead(copy.deepcopy(self._params))

    def adapt(self, features: FloatArray) -> FloatArray:
        """Apply the adapter along the last axis (queries or an image feature map)."""
        result: FloatArray = np.asarray(features, dtype=np.float64) @ self._params["A"].T
        return result

    def forward(self, features: FloatArray, reference_boxes: FloatArray) -> HeadOutput:
        p = self._params
        adapted = self.adapt(features)
        logits = adapted @ p["W"].T + p["b"]
        raw = adapted @ p["Wb"].T + p["bb"]
        clipped = np.zeros(raw.shape, dtype=np.bool_)
        clipped[:, 2:] = np.abs(raw[:, 2:]) > _MAX_LOG_SCALE
        deltas = raw.copy()
        deltas[:, 2:] = np.clip(raw[:, 2:], -_MAX_LOG_SCALE, _MAX_LOG_SCALE)

        ref = np.asarray(reference_boxes, dtype=np.float64)
        boxes = np.column_stack(
            [
                ref[:, 0] + deltas[:, 0] * ref[:, 2],
                ref[:, 1] + deltas[:, 1] * ref[:, 3],
                ref[:, 2] * np.exp(deltas[:, 2]),
                ref[:, 3] * np.exp(deltas[:, 3]),
            ]
        )
        return HeadOutput(adapted, logits, deltas, boxes, clipped)

    def backward(
        self,
        features: FloatArray,
        reference_boxes: FloatArray,
        output: HeadOutput,
        logits_grad: FloatArray,
        boxes_grad: FloatArray,
        feature_grad: FloatArray | None = None,
        train_adapter: bool = True,
    ) -> dict[str, FloatArray]:
        """
        Parameter gradients of one image.

        Args:
            features: Raw query features F the forward pass saw
            reference_boxes: Reference boxes the forward pass saw
            output: Result of forward(features, reference_boxes)
            logits_grad: d loss / d logits
            boxes_grad: d loss / d boxes
            feature_grad: d loss / d adapted features from terms outside the head
            train_adapter: When False the adapter gradient is zero

        Returns:
            Gradient per parameter name, shapes matching params
        """
        p = self._params
        ref = np.asarray(reference_boxes, dtype=np.float64)
        jacobian = np.column_stack([ref[:, 2], ref[:, 3], output.boxes[:, 2], output.boxes[:, 3]])
        delta_grad = np.where(output.clipped, 0.0, boxes_grad * jacobian)

        h = output.adapted
        grads = {
            "W": logits_grad.T @ h,
            "b": logits_grad.sum(axis=0),
            "Wb": delta_grad.T @ h,
            "bb": delta_grad.sum(axis=0),
            "A": np.zeros_like(p["A"]),
        }
        if train_adapter:
            h_grad = logits_grad @ p["W"] + delta_grad @ p["Wb"]
            if feature_grad is not None:
                h_grad = h_grad + feature_grad
            grads["A"] = h_grad.T @ np.asarray(features, dtype=np.float64)
        return grads
