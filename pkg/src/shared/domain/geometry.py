"""
Box geometry shared by every module: area, IoU and generalized IoU.

Scalar functions work on BBox value objects; the pairwise variants work on
N x 4 arrays and back the evaluator, the matcher and de-duplication. Edge
differences are always computed from (x1, y1, x2, y2) so that a box compared
with itself yields IoU exactly 1.
"""

import numpy as np
from numpy.typing import NDArray

from src.shared.domain.value_objects.bbox import BBox

FloatArray = NDArray[np.float64]


def area(b: BBox) -> float:
    return b.w * b.h


def _overlap(a: BBox, b: BBox) -> tuple[float, float, float]:
    ax1, ay1, ax2, ay2 = a.to_xyxy()
    bx1, by1, bx2, by2 = b.to_xyxy()
    inter_w = max(0.0, min(ax2, bx2) - max(ax1, bx1))
    inter_h = max(0.0, min(ay2, by2) - max(ay1, by1))
    inter = inter_w * inter_h
    area_a = (ax2 - ax1) * (ay2 - ay1)
    area_b = (bx2 - bx1) * (by2 - by1)
    return inter, area_a + area_b - inter, _enclosing_area(a, b)


def _enclosing_area(a: BBox, b: BBox) -> float:
    ax1, ay1, ax2, ay2 = a.to_xyxy()
    bx1, by1, bx2, by2 = b.to_xyxy()
    return (max(ax2, bx2) - min(ax1, bx1)) * (max(ay2, by2) - min(ay1, by1))


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union, 0.0 for disjoint boxes."""
    inter, union, _ = _overlap(a, b)
    return inter / union


def generalized_iou(a: BBox, b: BBox) -> float:
    """IoU minus the share of the enclosing box not covered by the union."""
    inter, union, enclosing = _overlap(a, b)
    slack = max(0.0, enclosing - union)
    return inter / union - slack / enclosing


def boxes_to_array(boxes: list[BBox] | tuple[BBox, ...]) -> FloatArray:
    """Stack boxes into an N x 4 (x, y, w, h) array."""
    if not boxes:
        return np.zeros((0, 4), dtype=np.float64)
    return np.array([b.as_list() for b in boxes], dtype=np.float64)


def xywh_to_xyxy(boxes: FloatArray) -> FloatArray:
    out = boxes.copy()
    out[:, 2] = boxes[:, 0] + boxes[:, 2]
    out[:, 3] = boxes[:, 1] + boxes[:, 3]
    return out


def cxcywh_to_xyxy(boxes: FloatArray) -> FloatArray:
    cx, cy, w, h = boxes[:, 0], boxes[:, 1], boxes[:, 2], boxes[:, 3]
    return np.stack([cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0], axis=1)


def _pairwise_terms(
    a_xyxy: FloatArray, b_xyxy: FloatArray
) -> tuple[FloatArray, FloatArray, FloatArray]:
    a = a_xyxy[:, None, :]
    b = b_xyxy[None, :, :]
    inter_w = np.clip(np.minimum(a[..., 2], b[..., 2]) - np.maximum(a[..., 0], b[..., 0]), 0, None)
    inter_h = np.clip(np.minimum(a[..., 3], b[..., 3]) - np.maximum(a[..., 1], b[..., 1]), 0, None)
    inter = inter_w * inter_h
    area_a = (a[..., 2] - a[..., 0]) * (a[..., 3] - a[..., 1])
    area_b = (b[..., 2] - b[..., 0]) * (b[..., 3] - b[..., 1])
    union = area_a + area_b - inter
    enclosing = (np.maximum(a[..., 2], b[..., 2]) - np.minimum(a[..., 0], b[..., 0])) * (
        np.maximum(a[..., 3], b[..., 3]) - np.minimum(a[..., 1], b[..., 1])
    )
    return inter, union, enclosing


def pairwise_iou(a_xywh: FloatArray, b_xywh: FloatArray) -> FloatArray:
    """
    IoU between every box of `a` and every box of `b`.

    Args:
        a_xywh: N x 4 boxes in (x, y, w, h)
        b_xywh: M x 4 boxes in (x, y, w, h)

    Returns:
        N x M IoU matrix (empty when either side is empty)
    """
    if len(a_xywh) == 0 or len(b_xywh) == 0:
        return np.zeros((len(a_xywh), len(b_xywh)), dtype=np.float64)
    inter, union, _ = _pairwise_terms(xywh_to_xyxy(a_xywh), xywh_to_xyxy(b_xywh))
    return np.asarray(inter / union, dtype=np.float64)


def pairwise_generalized_iou_xyxy(a_xyxy: FloatArray, b_xyxy: FloatArray) -> FloatArray:
    """Generalized IoU matrix for boxes already in corner form."""
    if len(a_xyxy) == 0 or len(b_xyxy) == 0:
        return np.zeros((len(a_xyxy), len(b_xyxy)), dtype=np.float64)
    inter, union, enclosing = _pairwise_terms(a_xyxy, b_xyxy)
    slack = np.clip(enclosing - union, 0, None)
    return np.asarray(inter / union - slack / enclosing, dtype=np.float64)
