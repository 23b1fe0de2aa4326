"""
Pseudo-label selection for old classes.

The frozen teacher's predictions on current-task images feed two things:
the per-class score banks (candidates above delta_min) and, once thresholds
are known, the pseudo-labels themselves (score >= tau of the predicted old
class). Pseudo-labels that overlap a current-task ground-truth box at
IoU >= theta_nms are discarded, regardless of class.
"""

import logging
from collections import defaultdict
from collections.abc import Collection, Iterable, Mapping, Sequence

import numpy as np

from src.pseudo_label.domain.entities.score_bank import ScoreBank
from src.pseudo_label.domain.exceptions import PseudoLabelError
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig
from src.pseudo_label.domain.value_objects.threshold_table import ThresholdTable
from src.shared.domain.geometry import boxes_to_array, pairwise_iou
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.detection import Detection

logger = logging.getLogger(__name__)


def bank_candidates(
    teacher_preds: Iterable[Detection], old_classes: Collection[int], delta_min: float
) -> dict[int, list[float]]:
    """Scores above delta_min grouped by predicted old class, in stream order."""
    grouped: dict[int, list[float]] = defaultdict(list)
    for det in teacher_preds:
        if det.class_id in old_classes and det.score > delta_min:
            grouped[det.class_id].append(det.score)
    return dict(grouped)


def update_banks(
    banks: Mapping[int, ScoreBank],
    teacher_preds: Iterable[Detection],
    old_classes: Collection[int],
    cfg: CpgConfig,
) -> dict[int, ScoreBank]:
    """
    Feed one batch of teacher predictions into the banks of the old classes.

    Every old class ends up with a bank, empty if it never had a candidate.
    """
    candidates = bank_candidates(teacher_preds, old_classes, cfg.delta_min)
    updated: dict[int, ScoreBank] = dict(banks)
    for class_id in sorted(old_classes):
        bank = updated.get(class_id) or ScoreBank(
            class_id=class_id, capacity=cfg.capacity, delta_min=cfg.delta_min
        )
        updated[class_id] = bank.updated(candidates.get(class_id, ()))
    return updated


def generate_pseudo_labels(
    teacher_preds: Iterable[Detection],
    thresholds: ThresholdTable,
    old_classes: Collection[int] | None = None,
) -> list[Annotation]:
    """
    Keep teacher predictions whose score reaches their class threshold.

    Args:
        teacher_preds: Teacher detections, each carrying its image_id
        thresholds: Per-class thresholds
        old_classes: Classes eligible for pseudo-labelling; defaults to the
            classes present in the table

    Returns:
        Pseudo annotations (is_pseudo=True, score kept), in input order

    Raises:
        MissingThresholdError: If an old-class prediction has no threshold
        PseudoLabelError: If a kept prediction has no image_id
    """
    eligible = thresholds.old_classes if old_classes is None else frozenset(old_classes)
    kept: list[Annotation] = []
    for det in teacher_preds:
        if det.class_id not in eligible:
            continue
        if det.score < thresholds.tau(det.class_id):
            continue
        if det.image_id is None:
            raise PseudoLabelError(f"Detection of class {det.class_id} has no image id")
        kept.append(
            Annotation(
                image_id=det.image_id,
                bbox=det.bbox,
                class_id=det.class_id,
                is_pseudo=True,
                score=det.score,
            )
        )
    return kept


def deduplicate(
    pseudo: Sequence[Annotation], gt: Sequence[Annotation], theta_nms: float
) -> list[Annotation]:
    """
    Drop pseudo-labels overlapping any ground-truth box of the same image.

    A pseudo-label survives iff its maximum IoU against the image's ground
    truth is below theta_nms. Order is preserved.
    """
    gt_by_image: dict[int, list[Annotation]] = defaultdict(list)
    for annotation in gt:
        gt_by_image[annotation.image_id].append(annotation)

    gt_boxes = {
        image_id: boxes_to_array([a.bbox for a in annotations])
        for image_id, annotations in gt_by_image.items()
    }

    kept: list[Annotation] = []
    for candidate in pseudo:
        boxes = gt_boxes.get(candidate.image_id)
        if boxes is not None:
            overlap = pairwise_iou(boxes_to_array([candidate.bbox]), boxes)
            if float(np.max(overlap)) >= theta_nms:
                continue
        kept.append(candidate)

    dropped = len(pseudo) - len(kept)
    if dropped:
        logger.debug("De-duplication removed %d of %d pseudo-labels", dropped, len(pseudo))
    return kept
