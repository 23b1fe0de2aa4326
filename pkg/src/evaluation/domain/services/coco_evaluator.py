"""
COCO-protocol average precision.

Per class and image, detections are ranked by score (stable order on ties)
and capped at max_detections. Each detection is greedily matched to the
unmatched ground-truth box with the highest IoU at or above the threshold.
Area ranges follow the scale buckets of ScaleConfig: ground truth outside
the range is ignored, a detection matched to ignored ground truth is
ignored, and an unmatched detection outside the range is ignored.

Across images, detections are merged and re-ranked by score; precision is
made monotone from the right and read at 101 recall points. The AP of a
class with no non-ignored ground truth is undefined (None).

Per-class work units are independent and run on a thread pool; results are
assembled in ascending class order.
"""

import logging
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.benchmark.domain.value_objects.task_schedule import TaskSchedule
from src.evaluation.domain.value_objects.eval_report import (
    IOU_THRESHOLDS,
    RECALL_POINTS,
    ClassResult,
    EvalReport,
)
from src.shared.domain.entities.coco_dataset import CocoDataset
from src.shared.domain.exceptions import UnknownCategoryError
from src.shared.domain.geometry import boxes_to_array, pairwise_iou
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.detection import Detection
from src.shared.domain.value_objects.scale import ScaleBucket, ScaleConfig

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
BoolArray = NDArray[np.bool_]

_THRESHOLDS = np.array(IOU_THRESHOLDS)
_RECALLS = np.array(RECALL_POINTS)


@dataclass(frozen=True, eq=False)
class _ImageMatches:
    """Matching outcome of one image, one class and one area range."""

    scores: FloatArray
    matched: BoolArray
    ignored: BoolArray
    num_gt: int


def _match_image(
    ious: FloatArray,
    det_in_range: BoolArray,
    gt_ignored: BoolArray,
    scores: FloatArray,
) -> _ImageMatches:
    num_dets, num_gts = ious.shape
    gt_order = np.argsort(gt_ignored, kind="mergesort")
    ious = ious[:, gt_order]
    gt_ignored = gt_ignored[gt_order]

    matched = np.zeros((len(_THRESHOLDS), num_dets), dtype=np.bool_)
    ignored = np.zeros((len(_THRESHOLDS), num_dets), dtype=np.bool_)

    for t, threshold in enumerate(_THRESHOLDS):
        gt_taken = np.zeros(num_gts, dtype=np.bool_)
        for d in range(num_dets):
            best_iou = min(threshold, 1 - 1e-10)
            best = -1
            for g in range(num_gts):
                if gt_taken[g]:
                    continue
                if best > -1 and not gt_ignored[best] and gt_ignored[g]:
                    break
                if ious[d, g] < best_iou:
                    continue
                best_iou = ious[d, g]
                best = g
            if best == -1:
                ignored[t, d] = not det_in_range[d]
                continue
            gt_taken[best] = True
            matched[t, d] = True
            ignored[t, d] = bool(gt_ignored[best])

    return _ImageMatches(
        scores=scores,
        matched=matched,
        ignored=ignored,
        num_gt=int(np.count_nonzero(~gt_ignored)),
    )


def interpolated_precision(
    scores: FloatArray, matched: BoolArray, ignored: BoolArray, num_gt: int
) -> FloatArray | None:
    """
    101-point interpolated precision of one ranked detection list.

    Returns:
        Precision at RECALL_POINTS, or None when num_gt is 0
    """
    if num_gt == 0:
        return None
    order = np.argsort(-scores, kind="mergesort")
    keep = ~ignored[order]
    tp = matched[order][keep]
    fp = ~tp

    tp_cum = np.cumsum(tp).astype(np.float64)
    fp_cum = np.cumsum(fp).astype(np.float64)
    precision_at = np.zeros(len(_RECALLS), dtype=np.float64)
    if tp_cum.size == 0:
        return precision_at

    recall = tp_cum / num_gt
    precision = tp_cum / (tp_cum + fp_cum)
    precision = np.maximum.accumulate(precision[::-1])[::-1]

    positions = np.searchsorted(recall, _RECALLS, side="left")
    valid = positions < precision.size
    precision_at[valid] = precision[positions[valid]]
    return precision_at


def _evaluate_class(
    class_id: int,
    gt_by_image: dict[int, list[Annotation]],
    dets_by_image: dict[int, list[Detection]],
    image_ids: Sequence[int],
    scale: ScaleConfig,
    max_detections: int,
) -> ClassResult:
    ranges: dict[str, list[_ImageMatches]] = defaultdict(list)
    num_gt = 0
    for image_id in image_ids:
        gts = gt_by_image.get(image_id, [])
        dets = sorted(dets_by_image.get(image_id, []), key=lambda d: -d.score)[:max_detections]
        if not gts and not dets:
            continue
        num_gt += len(gts)

        gt_boxes = boxes_to_array([a.bbox for a in gts])
        det_boxes = boxes_to_array([d.bbox for d in dets])
        ious = pairwise_iou(det_boxes, gt_boxes)
        scores = np.array([d.score for d in dets], dtype=np.float64)
        gt_buckets = [scale.bucket_of(a.bbox.area) for a in gts]
        det_buckets = [scale.bucket_of(d.bbox.area) for d in dets]

        ranges["all"].append(
            _match_image(
                ious,
                np.ones(len(dets), dtype=np.bool_),
                np.zeros(len(gts), dtype=np.bool_),
                scores,
            )
        )
        for bucket in ScaleBucket:
            ranges[bucket.value].append(
                _match_image(
                    ious,
                    np.array([b is bucket for b in det_buckets], dtype=np.bool_),
                    np.array([b is not bucket for b in gt_buckets], dtype=np.bool_),
                    scores,
                )
            )

    def curves(name: str) -> list[FloatArray] | None:
        parts = ranges.get(name, [])
        total_gt = sum(p.num_gt for p in parts)
        if total_gt == 0:
            return None
        scores = np.concatenate([p.scores for p in parts])
        result: list[FloatArray] = []
        for t in range(len(_THRESHOLDS)):
            matched = np.concatenate([p.matched[t] for p in parts])
            ignored = np.concatenate([p.ignored[t] for p in parts])
            curve = interpolated_precision(scores, matched, ignored, total_gt)
            assert curve is not None
            result.append(curve)
        return result

    def mean_ap(name: str) -> float | None:
        per_iou = curves(name)
        return None if per_iou is None else float(np.mean([c.mean() for c in per_iou]))

    all_curves = curves("all")
    return ClassResult(
        class_id=class_id,
        num_gt=num_gt,
        ap_per_iou=None if all_curves is None else tuple(float(c.mean()) for c in all_curves),
        ap_small=mean_ap(ScaleBucket.SMALL.value),
        ap_medium=mean_ap(ScaleBucket.MEDIUM.value),
        ap_large=mean_ap(ScaleBucket.LARGE.value),
        pr_curve=None if all_curves is None else tuple(float(p) for p in all_curves[0]),
    )


def evaluate(
    detections: Sequence[Detection],
    gt: CocoDataset,
    schedule: TaskSchedule,
    current_task: int,
    scale: ScaleConfig | None = None,
    max_detections: int = 100,
    workers: int = 1,
) -> EvalReport:
    """
    Evaluate detections against ground truth for the classes seen up to a stage.

    Args:
        detections: Detections carrying image ids
        gt: Fully annotated evaluation set
        schedule: Task schedule defining previous and current classes
        current_task: 1-based stage whose model produced the detections
        scale: Area boundaries of the small/medium/large ranges
        max_detections: Per image and class cap on ranked detections
        workers: Threads for per-class evaluation

    Raises:
        UnknownCategoryError: If a detection's class is not a dataset category
        UnknownStageError: If current_task is outside the schedule
    """
    scale = scale or ScaleConfig()
    schedule.validate_against(gt.category_ids)
    evaluated = schedule.seen_classes(current_task)
    known_categories = set(gt.category_ids)
    known_images = {image.image_id for image in gt.images}

    dets_by_class: dict[int, dict[int, list[Detection]]] = defaultdict(lambda: defaultdict(list))
    skipped = 0
    for det in detections:
        if det.class_id not in known_categories:
            raise UnknownCategoryError(det.class_id, "detection stream")
        if det.image_id not in known_images:
            skipped += 1
            continue
        if det.class_id in evaluated:
            dets_by_class[det.class_id][det.image_id].append(det)
    if skipped:
        logger.warning("Ignoring %d detections on images outside the ground truth", skipped)

    gt_by_class: dict[int, dict[int, list[Annotation]]] = defaultdict(lambda: defaultdict(list))
    for annotation in gt.annotations:
        if annotation.class_id in evaluated and not annotation.is_pseudo:
            gt_by_class[annotation.class_id][annotation.image_id].append(annotation)

    image_ids = [image.image_id for image in gt.images]
    classes = sorted(evaluated)

    def run(class_id: int) -> ClassResult:
        return _evaluate_class(
            class_id,
            gt_by_class.get(class_id, {}),
            dets_by_class.get(class_id, {}),
            image_ids,
            scale,
            max_detections,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, classes))
    else:
        results = [run(c) for c in classes]

    logger.debug("Evaluated %d classes over %d images", len(classes), len(image_ids))
    return EvalReport(
        per_class={r.class_id: r for r in results},
        previous_classes=schedule.old_classes(current_task),
        current_classes=schedule.classes(current_task),
        stage=current_task,
    )


def forgetting_delta(
    before: EvalReport,
    after: EvalReport,
    classes: Sequence[int],
    metrics: Sequence[str] = ("ap", "ap50", "ap75"),
) -> dict[int, dict[str, float | None]]:
    """
    Per-class AP drop (before - after) for the requested metrics.

    A drop is None when either side's AP is undefined.

    Raises:
        ClassNotInReportError: If a class is missing from either report
    """
    drops: dict[int, dict[str, float | None]] = {}
    for class_id in classes:
        old, new = before.result(class_id), after.result(class_id)
        row: dict[str, float | None] = {}
        for name in metrics:
            a, b = old.metric(name), new.metric(name)
            row[name] = None if a is None or b is None else a - b
        drops[class_id] = row
    return drops
