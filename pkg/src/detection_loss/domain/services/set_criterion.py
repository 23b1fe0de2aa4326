"""
DETR-style set prediction loss and the full incremental objective.

Given a match between queries and targets, every query receives a sigmoid
focal classification loss against a one-hot target (its matched class) or
an all-zero target (no object). Matched queries additionally receive the box
regression loss 5 * L1 + 2 * (1 - GIoU) on normalized center boxes. Terms are
summed, not averaged, so per-image losses add across a batch.

Focal loss per logit x with p = sigmoid(x), q = 1 - p:

    y = 1:  -alpha * q^gamma * log p         grad  alpha * q^gamma * (gamma * p * log p - q)
    y = 0:  -(1 - alpha) * p^gamma * log q   grad  (1 - alpha) * p^gamma * (p - gamma * q * log q)
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import expit, log_expit

from src.detection_loss.domain.exceptions import (
    InvalidLossComponentError,
    InvalidTargetsError,
)
from src.detection_loss.domain.value_objects.loss_breakdown import LossBreakdown
from src.detection_loss.domain.value_objects.match_result import MatchResult
from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.detection_loss.domain.value_objects.target_set import TargetSet
from src.shared.domain.box_regression import box_regression_loss_and_grad
from src.shared.domain.value_objects.layer_responses import LayerResponses

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class DetrResult:
    """
    Attributes:
        loss: classification + regression
        classification: Summed focal loss over all queries and classes
        regression: Summed box loss over matched queries
        logits_grad: N x C gradient with respect to the logits
        boxes_grad: N x 4 gradient with respect to the boxes
    """

    loss: float
    classification: float
    regression: float
    logits_grad: FloatArray
    boxes_grad: FloatArray


def focal_loss_and_grad(
    logits: FloatArray, targets: FloatArray, row_weights: FloatArray, alpha: float, gamma: float
) -> tuple[float, FloatArray]:
    """
    Row-weighted sigmoid focal loss over an N x C logit matrix with 0/1 targets.

    Returns:
        (summed loss, N x C gradient)
    """
    p = expit(logits)
    q = expit(-logits)
    log_p = log_expit(logits)
    log_q = log_expit(-logits)

    positive = targets > 0.5
    loss_matrix = np.where(
        positive,
        -alpha * q**gamma * log_p,
        -(1.0 - alpha) * p**gamma * log_q,
    )
    grad_matrix = np.where(
        positive,
        alpha * q**gamma * (gamma * p * log_p - q),
        (1.0 - alpha) * p**gamma * (p - gamma * q * log_q),
    )
    weights = row_weights[:, None]
    return float(np.sum(weights * loss_matrix)), weights * grad_matrix


def classification_targets(
    num_queries: int, num_classes: int, targets: TargetSet, match: MatchResult
) -> FloatArray:
    """One-hot rows for matched queries, all-zero rows for unmatched ones."""
    onehot = np.zeros((num_queries, num_classes), dtype=np.float64)
    for query, target in match.pairs():
        onehot[query, int(targets.class_ids[target])] = 1.0
    return onehot


def detr_loss(
    preds: LayerResponses, targets: TargetSet, match: MatchResult, cfg: SetLossConfig
) -> DetrResult:
    """
    Detection loss of one image under a precomputed match.

    Args:
        preds: Student outputs of one layer
        targets: Ground truth and pseudo-labels of the image
        match: Assignment produced by match() for exactly these preds/targets
        cfg: Loss weights

    Raises:
        StaleMatchError: If match was computed for different shapes
        InvalidTargetsError: If a target class has no logit column
    """
    match.ensure_matches(preds.num_queries, len(targets))
    if len(targets) and int(targets.class_ids.max()) >= preds.num_classes:
        raise InvalidTargetsError(
            f"Target class {int(targets.class_ids.max())} exceeds the "
            f"{preds.num_classes} logit columns"
        )

    pairs = match.pairs()
    query_index = np.array([q for q, _ in pairs], dtype=np.int64)
    target_index = np.array([t for _, t in pairs], dtype=np.int64)

    row_weights = np.ones(preds.num_queries, dtype=np.float64)
    if len(pairs):
        pseudo = targets.is_pseudo[target_index]
        row_weights[query_index[pseudo]] = cfg.pseudo_weight

    onehot = classification_targets(preds.num_queries, preds.num_classes, targets, match)
    classification, logits_grad = focal_loss_and_grad(
        preds.logits, onehot, row_weights, cfg.focal_alpha, cfg.focal_gamma
    )

    boxes_grad = np.zeros_like(preds.boxes)
    regression = 0.0
    if len(pairs):
        box_result = box_regression_loss_and_grad(
            preds.boxes[query_index],
            targets.boxes[target_index],
            row_weights[query_index],
            cfg.bbox_l1_weight,
            cfg.bbox_giou_weight,
        )
        regression = box_result.loss
        boxes_grad[query_index] = box_result.grad

    return DetrResult(
        loss=classification + regression,
        classification=classification,
        regression=regression,
        logits_grad=logits_grad,
        boxes_grad=boxes_grad,
    )


def total_loss(
    detr: float,
    std: float,
    crd: float,
    lambda1: float = 3.0,
    align: float = 0.0,
    reg: float = 0.0,
) -> LossBreakdown:
    """
    Combine the detection, topology and response terms: detr + lambda1 * std + crd.

    Raises:
        InvalidLossComponentError: If any component is NaN or infinite
    """
    components = {"detr": detr, "std": std, "crd": crd, "lambda1": lambda1}
    for name, value in components.items():
        if not math.isfinite(value):
            raise InvalidLossComponentError(f"Loss component {name} is not finite: {value}")
    return LossBreakdown(
        detr=detr,
        std=std,
        crd=crd,
        total=detr + lambda1 * std + crd,
        align=align,
        reg=reg,
        lambda1=lambda1,
    )
