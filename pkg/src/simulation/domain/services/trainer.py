"""
Stage training of the simulated head.

Business Rules:
    - Stage 1 trains on ground truth alone (finetune); later stages add the
      components of the selected mode
    - The teacher is a frozen copy of the previous stage's head and is never
      modified
    - Score banks start empty at every stage and are fed once per batch, in
      image order, with the teacher's old-class detections
    - Pseudo-labels overlapping ground truth are dropped; the rest are
      capped so an image never has more targets than queries
    - Topology distillation runs on the whole batch, with query labels taken
      from the teacher's pseudo-label assignment and scale buckets from the
      teacher's boxes
    - Gradients are averaged over the images of a batch; the ledger keeps
      per-epoch means per image
    - Response distillation enters the objective scaled by train.crd_weight;
      the ledger records the scaled terms

Batch Flow:
    1. Forward student and teacher on every image (fan-out)
    2. Update banks, rebuild thresholds, select pseudo-labels (serial)
    3. Matching, detection loss and response distillation per image (fan-out)
    4. Topology distillation over the concatenated batch
    5. Backward per image (fan-out), ordered reduction, one optimiser step
"""

import logging
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TypeVar

import numpy as np
from numpy.typing import NDArray
from scipy.special import expit

from src.detection_loss.domain.services.hungarian_matcher import match
from src.detection_loss.domain.services.set_criterion import detr_loss, total_loss
from src.detection_loss.domain.value_objects.loss_breakdown import LossBreakdown
from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.detection_loss.domain.value_objects.target_set import TargetSet
from src.distillation.domain.services.response_distillation import crd_total
from src.distillation.domain.services.scale_partitioner import partition
from src.distillation.domain.services.topology_distillation import std_loss_and_grad
from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.distillation.domain.value_objects.query_labels import UNLABELED, QueryLabels
from src.pseudo_label.domain.entities.score_bank import ScoreBank
from src.pseudo_label.domain.services.pseudo_labeler import (
    deduplicate,
    generate_pseudo_labels,
    update_banks,
)
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig
from src.pseudo_label.domain.value_objects.threshold_table import Provenance, ThresholdTable
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection
from src.shared.domain.value_objects.layer_responses import LayerResponses
from src.shared.domain.value_objects.query_batch import QueryBatch
from src.shared.domain.value_objects.scale import ScaleConfig
from src.simulation.domain.entities.student_head import HeadOutput, StudentHead
from src.simulation.domain.entities.world import SimImage
from src.simulation.domain.exceptions import MissingTeacherError
from src.simulation.domain.services.optimizer import MomentumSGD
from src.simulation.domain.value_objects.train_config import TrainConfig, TrainingMode

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class StageSettings:
    """
    Everything train_stage needs besides the heads and the images.

    Attributes:
        mode: Loss components to use
        old_classes: Classes learned in earlier stages
        train: Optimiser settings
        workers: Threads for per-image work, 1 runs serially
    """

    mode: TrainingMode
    old_classes: frozenset[int]
    train: TrainConfig = field(default_factory=TrainConfig)
    loss: SetLossConfig = field(default_factory=SetLossConfig)
    std: StdConfig = field(default_factory=StdConfig)
    crd: CrdConfig = field(default_factory=CrdConfig)
    cpg: CpgConfig = field(default_factory=CpgConfig)
    scale: ScaleConfig = field(default_factory=ScaleConfig)
    workers: int = 1


@dataclass(frozen=True, eq=False)
class StageOutcome:
    """
    Attributes:
        head: Trained head (a new object; the input head is untouched)
        epoch_losses: Per-epoch mean loss per image
        thresholds: Last threshold table, None when no teacher was used
        num_pseudo_labels: Pseudo-label targets used in the last epoch
    """

    head: StudentHead
    epoch_losses: tuple[LossBreakdown, ...]
    thresholds: ThresholdTable | None = None
    num_pseudo_labels: int = 0


@dataclass(frozen=True, eq=False)
class _Forward:
    image: SimImage
    student: HeadOutput
    teacher: HeadOutput | None
    teacher_detections: tuple[Detection, ...]


@dataclass(frozen=True, eq=False)
class _ImageLoss:
    detr: float
    align: float
    reg: float
    logits_grad: FloatArray
    boxes_grad: FloatArray


class _FanOut:
    """Ordered map over a thread pool, or a plain loop for one worker."""

    def __init__(self, workers: int) -> None:
        self._pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
        if self._pool is None:
            return [fn(item) for item in items]
        return list(self._pool.map(fn, items))

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()


def emit_detections(
    output: HeadOutput, image: SimImage, classes: frozenset[int] | Sequence[int]
) -> tuple[Detection, ...]:
    """
    One detection per query: the best of the given class columns, sigmoid score.

    Boxes are converted back to pixels of the image.
    """
    columns = np.array(sorted(classes), dtype=np.int64)
    sub = output.logits[:, columns]
    best = sub.argmax(axis=1)
    scores = expit(sub[np.arange(sub.shape[0]), best])
    return tuple(
        Detection(
            bbox=BBox.from_normalized_cxcywh(*output.boxes[q], image.size, image.size),
            score=float(scores[q]),
            class_id=int(columns[best[q]]),
            query_index=q,
            image_id=image.image_id,
        )
        for q in range(sub.shape[0])
    )


def predict(
    head: StudentHead, image: SimImage, classes: frozenset[int] | Sequence[int]
) -> tuple[Detection, ...]:
    """Detections of a head on one image, restricted to the given classes."""
    return emit_detections(head.forward(image.features, image.reference_boxes), image, classes)


def _select_pseudo_labels(
    forward: _Forward, thresholds: ThresholdTable, old_classes: frozenset[int], cpg: CpgConfig
) -> list[tuple[int, Annotation]]:
    gt = forward.image.annotations()
    selected: list[tuple[int, Annotation]] = []
    for det in forward.teacher_detections:
        for pseudo in deduplicate(
            generate_pseudo_labels([det], thresholds, old_classes), gt, cpg.theta_nms
        ):
            selected.append((det.query_index, pseudo))

    room = forward.image.num_queries - len(gt)
    if len(selected) > room:
        selected = sorted(selected, key=lambda item: (-(item[1].score or 0.0), item[0]))[:room]
        selected.sort(key=lambda item: item[0])
    return selected


def _image_loss(
    forward: _Forward, targets: TargetSet, settings: StageSettings
) -> _ImageLoss:
    preds = LayerResponses(forward.student.logits, forward.student.boxes)
    result = detr_loss(preds, targets, match(preds, targets, settings.loss), settings.loss)
    logits_grad = result.logits_grad.copy()
    boxes_grad = result.boxes_grad.copy()

    align = reg = 0.0
    if settings.mode.uses_crd and forward.teacher is not None:
        teacher_layer = LayerResponses(forward.teacher.logits, forward.teacher.boxes)
        crd = crd_total([teacher_layer], [preds], settings.old_classes, settings.crd)
        weight = settings.train.crd_weight
        align, reg = weight * crd.align, weight * crd.reg
        logits_grad += weight * crd.layers[0].logits_grad
        boxes_grad += weight * crd.layers[0].boxes_grad

    return _ImageLoss(result.loss, align, reg, logits_grad, boxes_grad)


def _topology_step(
    forwards: Sequence[_Forward],
    assigned: Sequence[list[tuple[int, Annotation]]],
    student: StudentHead,
    teacher: StudentHead,
    settings: StageSettings,
) -> tuple[float, list[FloatArray]]:
    """Batch topology loss and its gradient split back per image (unweighted)."""
    teacher_views: list[QueryBatch] = []
    student_views: list[QueryBatch] = []
    pairs: list[tuple[int, float]] = []
    for forward, pseudo in zip(forwards, assigned, strict=True):
        if forward.teacher is None:
            raise MissingTeacherError(settings.mode.value)
        teacher_view = QueryBatch(
            features=forward.teacher.adapted,
            detections=forward.teacher_detections,
            image_features=teacher.adapt(forward.image.image_map),
        )
        teacher_views.append(teacher_view)
        student_views.append(
            teacher_view.with_features(
                forward.student.adapted, student.adapt(forward.image.image_map)
            )
        )
        labelled = {q: (a.class_id, a.score or 0.0) for q, a in pseudo}
        pairs.extend(
            labelled.get(q, (UNLABELED, 0.0)) for q in range(forward.image.num_queries)
        )

    teacher_batch = QueryBatch.concatenate(teacher_views)
    student_batch = QueryBatch.concatenate(student_views)
    result = std_loss_and_grad(
        teacher_batch,
        student_batch,
        QueryLabels.from_pairs(pairs),
        partition(teacher_batch, settings.scale),
        settings.std,
    )

    grads: list[FloatArray] = []
    offset = 0
    for forward in forwards:
        size = forward.image.num_queries
        grads.append(result.grad[offset : offset + size])
        offset += size
    return result.loss, grads


def _sum_grads(parts: Sequence[Mapping[str, FloatArray]], scale: float) -> dict[str, FloatArray]:
    total = {name: np.zeros_like(value) for name, value in parts[0].items()}
    for part in parts:
        for name, value in part.items():
            total[name] += value
    return {name: scale * value for name, value in total.items()}


def train_stage(
    student: StudentHead,
    teacher: StudentHead | None,
    images: Sequence[SimImage],
    settings: StageSettings,
) -> StageOutcome:
    """
    Train a copy of the student on one stage's images.

    Args:
        student: Head to start from, left unchanged
        teacher: Frozen head of the previous stage, None in stage 1
        images: Training images in a fixed order
        settings: Mode, old classes and hyperparameters

    Returns:
        StageOutcome with the trained head and the loss ledger

    Raises:
        MissingTeacherError: If the mode needs a teacher and none is given
        EmptyOldClassesError: If response distillation runs without old classes
    """
    mode = settings.mode
    if teacher is None and mode.needs_teacher:
        raise MissingTeacherError(mode.value)
    if not images:
        raise ValueError("A stage needs at least one training image")

    head = student.trainable_copy()
    optimizer = MomentumSGD(
        settings.train.learning_rate, settings.train.momentum, settings.train.max_grad_norm
    )
    uses_teacher_labels = teacher is not None and (mode.uses_cpg or mode.uses_std)
    old_classes = settings.old_classes
    lambda1 = settings.loss.lambda1
    batch_size = settings.train.batch_size
    batches = [images[i : i + batch_size] for i in range(0, len(images), batch_size)]

    banks: dict[int, ScoreBank] = {}
    thresholds: ThresholdTable | None = None
    epoch_losses: list[LossBreakdown] = []
    num_pseudo = 0
    fan_out = _FanOut(settings.workers)

    def forward_image(image: SimImage) -> _Forward:
        out = head.forward(image.features, image.reference_boxes)
        if teacher is None:
            return _Forward(image, out, None, ())
        teacher_out = teacher.forward(image.features, image.reference_boxes)
        detections = emit_detections(teacher_out, image, old_classes) if old_classes else ()
        return _Forward(image, out, teacher_out, detections)

    try:
        for epoch in range(1, settings.train.epochs + 1):
            detr_sum = std_sum = align_sum = reg_sum = 0.0
            num_pseudo = 0
            for batch in batches:
                forwards = fan_out.map(forward_image, batch)

                assigned: list[list[tuple[int, Annotation]]] = [[] for _ in forwards]
                if uses_teacher_labels:
                    batch_detections = [d for f in forwards for d in f.teacher_detections]
                    banks = update_banks(banks, batch_detections, old_classes, settings.cpg)
                    thresholds = ThresholdTable.build(
                        banks, old_classes, settings.cpg, warn=False
                    )
                    assigned = [
                        _select_pseudo_labels(f, thresholds, old_classes, settings.cpg)
                        for f in forwards
                    ]

                targets = []
                for forward, pseudo in zip(forwards, assigned, strict=True):
                    annotations = forward.image.annotations()
                    if mode.uses_cpg:
                        annotations += [a for _, a in pseudo]
                        num_pseudo += len(pseudo)
                    size = forward.image.size
                    targets.append(TargetSet.from_annotations(annotations, size, size))

                losses = fan_out.map(
                    lambda item: _image_loss(item[0], item[1], settings),
                    list(zip(forwards, targets, strict=True)),
                )

                feature_grads: list[FloatArray | None] = [None] * len(forwards)
                if mode.uses_std and teacher is not None:
                    std_value, std_grads = _topology_step(
                        forwards, assigned, head, teacher, settings
                    )
                    std_sum += std_value
                    feature_grads = [lambda1 * g for g in std_grads]

                def backward(index: int) -> dict[str, FloatArray]:
                    forward, loss = forwards[index], losses[index]
                    return head.backward(
                        forward.image.features,
                        forward.image.reference_boxes,
                        forward.student,
                        loss.logits_grad,
                        loss.boxes_grad,
                        feature_grads[index],
                        train_adapter=settings.train.use_adapter,
                    )

                grads = _sum_grads(
                    fan_out.map(backward, list(range(len(forwards)))), 1.0 / len(forwards)
                )
                optimizer.step(head, grads)

                detr_sum += sum(loss.detr for loss in losses)
                align_sum += sum(loss.align for loss in losses)
                reg_sum += sum(loss.reg for loss in losses)

            n = float(len(images))
            breakdown = total_loss(
                detr_sum / n,
                std_sum / n,
                (align_sum + reg_sum) / n,
                lambda1=lambda1,
                align=align_sum / n,
                reg=reg_sum / n,
            )
            epoch_losses.append(breakdown)
            logger.debug(
                "Mode %s epoch %d: total %.4f (detr %.4f, std %.4f, crd %.4f)",
                mode.value,
                epoch,
                breakdown.total,
                breakdown.detr,
                breakdown.std,
                breakdown.crd,
            )
    finally:
        fan_out.close()

    if thresholds is not None:
        fallback = [e.class_id for e in thresholds if e.provenance is Provenance.FALLBACK]
        if fallback:
            logger.warning(
                "Classes %s still used the fallback threshold at the end of the stage", fallback
            )

    return StageOutcome(
        head=head,
        epoch_losses=tuple(epoch_losses),
        thresholds=thresholds,
        num_pseudo_labels=num_pseudo,
    )
