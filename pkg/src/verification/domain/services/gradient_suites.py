"""
Seeded finite-difference checks of the analytic gradients.

Every suite draws a small random instance from its seed (at most 8 queries,
4 feature dimensions and 5 classes), evaluates the analytic gradient and
compares it with central differences of the loss.

Box pairs are drawn so that every predicted edge and every center/size
coordinate differs from its target by at least 0.01; the L1 and GIoU terms
are then differentiable in a neighbourhood far wider than the step.
"""

from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

from src.detection_loss.domain.services.set_criterion import detr_loss
from src.detection_loss.domain.value_objects.match_result import MatchResult
from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.detection_loss.domain.value_objects.target_set import TargetSet
from src.distillation.domain.services.response_distillation import crd_align, crd_reg
from src.distillation.domain.services.scale_partitioner import partition
from src.distillation.domain.services.topology_distillation import std_loss_and_grad
from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.distillation.domain.value_objects.query_labels import UNLABELED, QueryLabels
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection
from src.shared.domain.value_objects.layer_responses import LayerResponses
from src.shared.domain.value_objects.query_batch import QueryBatch
from src.shared.domain.value_objects.scale import ScaleConfig
from src.verification.domain.exceptions import InvalidCheckConfigError, UnknownSuiteError
from src.verification.domain.services.finite_difference import (
    DEFAULT_STEP,
    DEFAULT_TOLERANCE,
    central_difference,
    relative_error,
)
from src.verification.domain.value_objects.suite_result import SuiteResult

FloatArray = NDArray[np.float64]

SUITE_NAMES = ("std", "crd_align", "crd_reg", "detr")
MAX_QUERIES = 8
MAX_DIM = 4
MAX_CLASSES = 5


def _to_cxcywh(xyxy: FloatArray) -> FloatArray:
    return np.column_stack(
        [
            (xyxy[:, 0] + xyxy[:, 2]) / 2.0,
            (xyxy[:, 1] + xyxy[:, 3]) / 2.0,
            xyxy[:, 2] - xyxy[:, 0],
            xyxy[:, 3] - xyxy[:, 1],
        ]
    )


def box_pairs(rng: np.random.Generator, n: int) -> tuple[FloatArray, FloatArray]:
    """(targets, predictions) as normalized cxcywh, kept clear of every kink."""
    x1 = rng.uniform(0.1, 0.4, n)
    y1 = rng.uniform(0.1, 0.4, n)
    w = rng.uniform(0.2, 0.4, n)
    h = rng.uniform(0.2, 0.4, n)
    target = np.column_stack([x1, y1, x1 + w, y1 + h])

    offsets = np.zeros((n, 4))
    for axis in (0, 1):
        sign = rng.choice([-1.0, 1.0], n)
        near = rng.uniform(0.01, 0.02, n)
        far = rng.uniform(0.03, 0.05, n)
        swap = rng.random(n) < 0.5
        offsets[:, axis] = sign * np.where(swap, far, near)
        offsets[:, axis + 2] = sign * np.where(swap, near, far)
    return _to_cxcywh(target), _to_cxcywh(target + offsets)


def _sizes(rng: np.random.Generator) -> tuple[int, int, int]:
    n = int(rng.integers(4, MAX_QUERIES + 1))
    d = int(rng.integers(2, MAX_DIM + 1))
    c = int(rng.integers(2, MAX_CLASSES + 1))
    return n, d, c


class GradientSuites:
    """
    The four gradient suites, run with the configured loss settings.

    Args:
        std: Topology distillation settings
        crd: Response distillation settings
        loss: Detection loss settings
        step: Central difference step
    """

    def __init__(
        self,
        std: StdConfig | None = None,
        crd: CrdConfig | None = None,
        loss: SetLossConfig | None = None,
        step: float = DEFAULT_STEP,
    ) -> None:
        if step <= 0:
            raise InvalidCheckConfigError(f"Finite difference step must be positive, got {step}")
        self._std = std or StdConfig()
        self._crd = crd or CrdConfig()
        self._loss = loss or SetLossConfig()
        self._step = step
        self._suites: dict[str, Callable[[int], float]] = {
            "std": self.std,
            "crd_align": self.crd_align,
            "crd_reg": self.crd_reg,
            "detr": self.detr,
        }

    def std(self, seed: int) -> float:
        rng = np.random.default_rng([seed, 0])
        n, d, _ = _sizes(rng)
        teacher_features = rng.normal(size=(n, d))
        student_features = teacher_features + 0.5 * rng.normal(size=(n, d))

        detections = []
        pairs: list[tuple[int, float]] = []
        for q in range(n):
            side = 20.0 if q % 2 == 0 else 50.0
            detections.append(Detection(BBox(0.0, 0.0, side, side), 0.5, 0, query_index=q))
            score = float(rng.uniform(0.1, 1.0))
            labelled = q < 4 or rng.random() < 0.7
            pairs.append(((q // 2) % 3, score) if labelled else (UNLABELED, 0.0))

        teacher = QueryBatch(teacher_features, tuple(detections), rng.normal(size=(2, 2, d)))
        student_map = rng.normal(size=(2, 2, d))
        labels = QueryLabels.from_pairs(pairs)
        part = partition(teacher, ScaleConfig())

        def loss(x: FloatArray) -> float:
            return std_loss_and_grad(
                teacher, teacher.with_features(x, student_map), labels, part, self._std
            ).loss

        analytic = std_loss_and_grad(
            teacher, teacher.with_features(student_features, student_map), labels, part, self._std
        ).grad
        return relative_error(analytic, central_difference(loss, student_features, self._step))

    def crd_align(self, seed: int) -> float:
        rng = np.random.default_rng([seed, 1])
        n, _, c = _sizes(rng)
        boxes = box_pairs(rng, n)[0]
        teacher = LayerResponses(2.0 * rng.normal(size=(n, c)), boxes)
        student_logits = 2.0 * rng.normal(size=(n, c))
        old = rng.choice(c, size=int(rng.integers(1, c + 1)), replace=False).tolist()
        cfg = self._crd

        def loss(z: FloatArray) -> float:
            student = LayerResponses(z, boxes)
            return crd_align(teacher, student, old, cfg.temperature, cfg.tau_squared).loss

        analytic = crd_align(
            teacher, LayerResponses(student_logits, boxes), old, cfg.temperature, cfg.tau_squared
        ).grad
        return relative_error(analytic, central_difference(loss, student_logits, self._step))

    def crd_reg(self, seed: int) -> float:
        rng = np.random.default_rng([seed, 2])
        n, _, c = _sizes(rng)
        teacher_boxes, student_boxes = box_pairs(rng, n)
        logits = rng.normal(size=(n, c))
        teacher = LayerResponses(logits, teacher_boxes)
        alpha = rng.uniform(0.0, 1.0, n)

        def loss(b: FloatArray) -> float:
            return crd_reg(teacher, LayerResponses(logits, b), alpha, self._crd).loss

        analytic = crd_reg(teacher, LayerResponses(logits, student_boxes), alpha, self._crd).grad
        return relative_error(analytic, central_difference(loss, student_boxes, self._step))

    def detr(self, seed: int) -> float:
        rng = np.random.default_rng([seed, 3])
        n, _, c = _sizes(rng)
        t = int(rng.integers(0, min(n, 3) + 1))
        target_boxes, matched_boxes = box_pairs(rng, max(t, 1))
        _, free_boxes = box_pairs(rng, n)

        queries = rng.permutation(n)[:t]
        boxes = free_boxes.copy()
        boxes[queries] = matched_boxes[:t]
        assignment: list[int | None] = [None] * n
        for target, query in enumerate(queries):
            assignment[int(query)] = target

        targets = TargetSet(
            class_ids=rng.integers(0, c, t),
            boxes=target_boxes[:t],
            is_pseudo=rng.random(t) < 0.5,
        )
        match = MatchResult(tuple(assignment), 0.0, t)
        logits = 2.0 * rng.normal(size=(n, c))
        split = logits.size

        def loss(x: FloatArray) -> float:
            preds = LayerResponses(x[:split].reshape(n, c), x[split:].reshape(n, 4))
            return detr_loss(preds, targets, match, self._loss).loss

        result = detr_loss(LayerResponses(logits, boxes), targets, match, self._loss)
        analytic = np.concatenate([result.logits_grad.ravel(), result.boxes_grad.ravel()])
        point = np.concatenate([logits.ravel(), boxes.ravel()])
        return relative_error(analytic, central_difference(loss, point, self._step))

    def run(self, name: str, seeds: int, tolerance: float = DEFAULT_TOLERANCE) -> SuiteResult:
        """
        Check one suite on seeds 0..seeds-1.

        Raises:
            UnknownSuiteError: If name is not one of SUITE_NAMES
            InvalidCheckConfigError: If seeds < 1 or tolerance <= 0
        """
        suite = self._suites.get(name)
        if suite is None:
            raise UnknownSuiteError(name, list(SUITE_NAMES))
        if seeds < 1:
            raise InvalidCheckConfigError(f"At least one seed is required, got {seeds}")
        if tolerance <= 0:
            raise InvalidCheckConfigError(f"Tolerance must be positive, got {tolerance}")

        errors = [suite(seed) for seed in range(seeds)]
        worst = int(np.argmax(errors))
        return SuiteResult(
            name=name,
            instances=seeds,
            max_error=float(errors[worst]),
            worst_seed=worst,
            tolerance=tolerance,
        )
