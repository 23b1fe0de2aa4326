"""
Exact two-cluster k-means on scalar scores.

In one dimension the optimal 2-means partition is a contiguous split of the
sorted values, so enumerating every split point with prefix sums finds the
global optimum of the within-cluster sum of squares in O(n log n). Splits
are only placed between distinct values; among equally good splits the one
with the lower threshold wins.
"""

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from src.pseudo_label.domain.entities.score_bank import ScoreBank

_TIE_RELATIVE = 1e-12


@dataclass(frozen=True)
class TwoMeansSplit:
    """
    Attributes:
        threshold: Smallest value of the high cluster
        mu_low: Mean of the low cluster
        mu_high: Mean of the high cluster
        wcss: Within-cluster sum of squares of the partition
        low_size: Number of values in the low cluster
    """

    threshold: float
    mu_low: float
    mu_high: float
    wcss: float
    low_size: int


def optimal_two_means(values: Iterable[float]) -> TwoMeansSplit | None:
    """
    Globally optimal 2-means partition of scalar values.

    Returns:
        The best split, or None when fewer than two distinct values exist
    """
    x = np.sort(np.fromiter(values, dtype=np.float64))
    n = x.size
    if n < 2 or x[0] == x[-1]:
        return None

    s1 = np.concatenate([[0.0], np.cumsum(x)])
    s2 = np.concatenate([[0.0], np.cumsum(x * x)])
    k = np.arange(1, n)
    k = k[x[k - 1] < x[k]]

    low_n = k.astype(np.float64)
    high_n = n - low_n
    low_sum, high_sum = s1[k], s1[n] - s1[k]
    low_sq, high_sq = s2[k], s2[n] - s2[k]
    wcss = (low_sq - low_sum**2 / low_n) + (high_sq - high_sum**2 / high_n)
    wcss = np.clip(wcss, 0.0, None)

    best = float(wcss.min())
    tolerance = _TIE_RELATIVE * max(1.0, float(s2[n]))
    # Lowest split index among near-ties gives the lowest threshold
    position = int(np.flatnonzero(wcss <= best + tolerance)[0])
    split = int(k[position])

    return TwoMeansSplit(
        threshold=float(x[split]),
        mu_low=float(low_sum[position] / low_n[position]),
        mu_high=float(high_sum[position] / high_n[position]),
        wcss=float(wcss[position]),
        low_size=split,
    )


def kmeans2_threshold(bank: ScoreBank, min_samples: int = 50) -> TwoMeansSplit | None:
    """
    Cluster a class's score bank and return the high cluster's lower bound.

    Returns:
        The split, or None when the bank is smaller than min_samples or holds a
        single distinct score; callers then use the fallback threshold
    """
    if len(bank) < min_samples:
        return None
    return optimal_two_means(bank.scores)
