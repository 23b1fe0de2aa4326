"""
Box regression loss with its analytic gradient.

L_bbox = w1 * L1 + w2 * (1 - GIoU), evaluated on normalized (cx, cy, w, h)
boxes. Used by the DETR-style detection loss (matched pairs) and by response
distillation (teacher box as target, student box as prediction).

Gradient derivation:
    GIoU = I/U + U/E - 1 with U = Ap + At - I. Treating I, Ap and E as
    functions of the prediction corners (x1, y1, x2, y2):
        dG/dI  = 1/U + I/U^2 - 1/E
        dG/dAp = 1/E - I/U^2
        dG/dE  = -U/E^2
    Corner partials follow from min/max selection; the chain to center form
    is d/dcx = d/dx1 + d/dx2 and d/dw = (d/dx2 - d/dx1) / 2.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.shared.domain.exceptions import InvalidBoxError

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class BoxRegressionResult:
    """
    Attributes:
        loss: Weighted sum over rows
        grad: d loss / d predictions, same shape as the predictions
        l1: Unweighted per-row L1 distance
        giou: Per-row generalized IoU
    """

    loss: float
    grad: FloatArray
    l1: FloatArray
    giou: FloatArray


def _require_valid(boxes: FloatArray, name: str) -> None:
    if boxes.ndim != 2 or boxes.shape[1] != 4:
        raise InvalidBoxError(f"{name} must be an N x 4 array, got {boxes.shape}")
    if not np.all(np.isfinite(boxes)):
        raise InvalidBoxError(f"{name} contain non-finite values")
    if np.any(boxes[:, 2] <= 0) or np.any(boxes[:, 3] <= 0):
        raise InvalidBoxError(f"{name} must have positive width and height")


def box_regression_loss_and_grad(
    pred: FloatArray,
    target: FloatArray,
    weights: FloatArray,
    l1_weight: float,
    giou_weight: float,
) -> BoxRegressionResult:
    """
    Row-weighted L1 + GIoU loss and its gradient with respect to `pred`.

    Args:
        pred: N x 4 predicted boxes (normalized cx, cy, w, h)
        target: N x 4 target boxes (same form); treated as constants
        weights: N per-row weights
        l1_weight: Coefficient of the L1 term
        giou_weight: Coefficient of the (1 - GIoU) term

    Returns:
        BoxRegressionResult with the scalar loss and an N x 4 gradient

    Raises:
        InvalidBoxError: If either side holds a degenerate or non-finite box
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if len(pred) == 0:
        empty = np.zeros(0, dtype=np.float64)
        return BoxRegressionResult(0.0, np.zeros((0, 4), dtype=np.float64), empty, empty)

    _require_valid(pred, "Predicted boxes")
    _require_valid(target, "Target boxes")

    diff = pred - target
    l1 = np.abs(diff).sum(axis=1)

    px1, py1 = pred[:, 0] - pred[:, 2] / 2.0, pred[:, 1] - pred[:, 3] / 2.0
    px2, py2 = pred[:, 0] + pred[:, 2] / 2.0, pred[:, 1] + pred[:, 3] / 2.0
    tx1, ty1 = target[:, 0] - target[:, 2] / 2.0, target[:, 1] - target[:, 3] / 2.0
    tx2, ty2 = target[:, 0] + target[:, 2] / 2.0, target[:, 1] + target[:, 3] / 2.0

    raw_w = np.minimum(px2, tx2) - np.maximum(px1, tx1)
    raw_h = np.minimum(py2, ty2) - np.maximum(py1, ty1)
    inter_w = np.clip(raw_w, 0.0, None)
    inter_h = np.clip(raw_h, 0.0, None)
    inter = inter_w * inter_h

    pw, ph = px2 - px1, py2 - py1
    area_p = pw * ph
    area_t = (tx2 - tx1) * (ty2 - ty1)
    union = area_p + area_t - inter

    enc_w = np.maximum(px2, tx2) - np.minimum(px1, tx1)
    enc_h = np.maximum(py2, ty2) - np.minimum(py1, ty1)
    enclosing = enc_w * enc_h

    giou = inter / union - (enclosing - union) / enclosing
    loss = float(np.sum(weights * (l1_weight * l1 + giou_weight * (1.0 - giou))))

    d_inter = 1.0 / union + inter / union**2 - 1.0 / enclosing
    d_area = 1.0 / enclosing - inter / union**2
    d_enc = -union / enclosing**2

    overlap_x = raw_w > 0
    overlap_y = raw_h > 0
    g_x1 = (
        d_inter * np.where(overlap_x & (px1 > tx1), -inter_h, 0.0)
        + d_area * -ph
        + d_enc * np.where(px1 < tx1, -enc_h, 0.0)
    )
    g_x2 = (
        d_inter * np.where(overlap_x & (px2 < tx2), inter_h, 0.0)
        + d_area * ph
        + d_enc * np.where(px2 > tx2, enc_h, 0.0)
    )
    g_y1 = (
        d_inter * np.where(overlap_y & (py1 > ty1), -inter_w, 0.0)
        + d_area * -pw
        + d_enc * np.where(py1 < ty1, -enc_w, 0.0)
    )
    g_y2 = (
        d_inter * np.where(overlap_y & (py2 < ty2), inter_w, 0.0)
        + d_area * pw
        + d_enc * np.where(py2 > ty2, enc_w, 0.0)
    )

    d_giou = np.stack(
        [g_x1 + g_x2, g_y1 + g_y2, (g_x2 - g_x1) / 2.0, (g_y2 - g_y1) / 2.0], axis=1
    )
    grad = weights[:, None] * (l1_weight * np.sign(diff) - giou_weight * d_giou)

    return BoxRegressionResult(loss=loss, grad=grad, l1=l1, giou=giou)
