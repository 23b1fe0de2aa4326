"""
Bipartite matching between decoder queries and training targets.

The cost of pairing query i with target j is

    cost_class * focal(i, c_j) + cost_bbox * |b_i - b_j|_1 - cost_giou * GIoU(b_i, b_j)

where focal(i, c) is the sigmoid focal alignment cost of predicting class c
at query i. The assignment minimising the summed cost over matched pairs is
found with scipy's linear_sum_assignment; queries left without a target are
mapped to None (no object).

When several assignments reach the optimum, the one whose per-query target
vector is lexicographically smallest wins (lower query first, then lower
target, with "no object" ranked after every target). The refinement only
runs when the cost matrix holds repeated values, which is the only practical
source of ties.
"""

import logging

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist
from scipy.special import expit, log_expit

from src.detection_loss.domain.exceptions import InvalidTargetsError, TooManyTargetsError
from src.detection_loss.domain.value_objects.match_result import MatchResult
from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.detection_loss.domain.value_objects.target_set import TargetSet
from src.shared.domain.geometry import cxcywh_to_xyxy, pairwise_generalized_iou_xyxy
from src.shared.domain.value_objects.layer_responses import LayerResponses

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

_TIE_TOLERANCE = 1e-9


def focal_class_cost(logits: FloatArray, cfg: SetLossConfig) -> FloatArray:
    """
    Per query and class, the focal alignment cost of labelling the query with that class.

    Returns:
        N x C matrix pos - neg, lower is a better match
    """
    prob = expit(logits)
    log_p = log_expit(logits)
    log_q = log_expit(-logits)
    gamma = cfg.focal_gamma
    pos = cfg.focal_alpha * (1.0 - prob) ** gamma * -log_p
    neg = (1.0 - cfg.focal_alpha) * prob**gamma * -log_q
    return np.asarray(pos - neg, dtype=np.float64)


def matching_cost(preds: LayerResponses, targets: TargetSet, cfg: SetLossConfig) -> FloatArray:
    """
    Build the N x T matching cost matrix.

    Raises:
        InvalidTargetsError: If a target class has no logit column
    """
    num_targets = len(targets)
    if num_targets == 0:
        return np.zeros((preds.num_queries, 0), dtype=np.float64)
    if int(targets.class_ids.max()) >= preds.num_classes:
        raise InvalidTargetsError(
            f"Target class {int(targets.class_ids.max())} exceeds the "
            f"{preds.num_classes} logit columns"
        )

    class_cost = focal_class_cost(preds.logits, cfg)[:, targets.class_ids]
    bbox_cost = cdist(preds.boxes, targets.boxes, metric="cityblock")
    giou = pairwise_generalized_iou_xyxy(
        cxcywh_to_xyxy(preds.boxes), cxcywh_to_xyxy(targets.boxes)
    )
    return np.asarray(
        cfg.cost_class * class_cost + cfg.cost_bbox * bbox_cost - cfg.cost_giou * giou,
        dtype=np.float64,
    )


def _completion_cost(cost: FloatArray, queries: list[int], targets: list[int]) -> float:
    """Optimal cost of matching every remaining target to a distinct remaining query."""
    if not targets:
        return 0.0
    if len(queries) < len(targets):
        return float("inf")
    sub = cost[np.ix_(queries, targets)]
    rows, cols = linear_sum_assignment(sub)
    return float(sub[rows, cols].sum())


def _lexicographic_refinement(cost: FloatArray, optimum: float) -> list[int | None]:
    num_queries, num_targets = cost.shape
    tolerance = _TIE_TOLERANCE * max(1.0, abs(optimum))
    assignment: list[int | None] = []
    unused = list(range(num_targets))
    spent = 0.0

    for query in range(num_queries):
        later = list(range(query + 1, num_queries))
        chosen: int | None = None
        for target in unused:
            remaining = [t for t in unused if t != target]
            total = spent + cost[query, target] + _completion_cost(cost, later, remaining)
            if total <= optimum + tolerance:
                chosen = target
                break
        if chosen is None:
            assignment.append(None)
            continue
        assignment.append(chosen)
        unused.remove(chosen)
        spent += float(cost[query, chosen])

    return assignment


def solve_assignment(cost: FloatArray) -> MatchResult:
    """
    Minimum-cost assignment of every column (target) to a distinct row (query).

    Args:
        cost: N x T matrix with N >= T

    Returns:
        MatchResult with the deterministic tie-broken optimum

    Raises:
        TooManyTargetsError: If T > N
    """
    cost = np.asarray(cost, dtype=np.float64)
    num_queries, num_targets = cost.shape
    if num_targets > num_queries:
        raise TooManyTargetsError(num_queries, num_targets)
    if num_targets == 0:
        return MatchResult(assignment=(None,) * num_queries, total_cost=0.0, num_targets=0)

    rows, cols = linear_sum_assignment(cost)
    optimum = float(cost[rows, cols].sum())

    if np.unique(cost).size < cost.size:
        assignment = _lexicographic_refinement(cost, optimum)
    else:
        assignment = [None] * num_queries
        for row, col in zip(rows, cols, strict=True):
            assignment[int(row)] = int(col)

    total = float(sum(cost[q, t] for q, t in enumerate(assignment) if t is not None))
    return MatchResult(assignment=tuple(assignment), total_cost=total, num_targets=num_targets)


def match(preds: LayerResponses, targets: TargetSet, cfg: SetLossConfig) -> MatchResult:
    """
    Match one image's predictions to its targets (ground truth plus pseudo-labels).

    Raises:
        TooManyTargetsError: If there are more targets than queries
        InvalidTargetsError: If a target class has no logit column
    """
    if len(targets) > preds.num_queries:
        raise TooManyTargetsError(preds.num_queries, len(targets))
    result = solve_assignment(matching_cost(preds, targets, cfg))
    logger.debug(
        "Matched %d targets over %d queries, cost %.6g",
        len(targets),
        preds.num_queries,
        result.total_cost,
    )
    return result
