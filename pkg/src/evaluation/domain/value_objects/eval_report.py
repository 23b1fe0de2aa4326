"""
Evaluation report value objects.

AP values are fractions in [0, 1]. A class without ground truth in the
evaluated set (or in a given area range) has an undefined AP, stored as
None and left out of every mean. Group means follow the task schedule:
previous classes (P), current classes (C) and all evaluated classes (A).
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from src.evaluation.domain.exceptions import ClassNotInReportError

IOU_THRESHOLDS: tuple[float, ...] = tuple(float(t) for t in np.linspace(0.5, 0.95, 10))
RECALL_POINTS: tuple[float, ...] = tuple(float(r) for r in np.linspace(0.0, 1.0, 101))
AREA_RANGES = ("all", "small", "medium", "large")


def mean_defined(values: Iterable[float | None]) -> float | None:
    """Mean over the defined values, None if there are none."""
    defined = [v for v in values if v is not None]
    return float(np.mean(defined)) if defined else None


@dataclass(frozen=True)
class ClassResult:
    """
    Attributes:
        class_id: Evaluated class
        num_gt: Ground-truth instances of the class
        ap_per_iou: AP at each of IOU_THRESHOLDS (area range "all"), None without GT
        ap_small: AP over 0.50:0.95 restricted to small objects
        ap_medium: Same for medium objects
        ap_large: Same for large objects
        pr_curve: Interpolated precision at the 101 RECALL_POINTS for IoU 0.50
    """

    class_id: int
    num_gt: int
    ap_per_iou: tuple[float, ...] | None
    ap_small: float | None = None
    ap_medium: float | None = None
    ap_large: float | None = None
    pr_curve: tuple[float, ...] | None = None

    @property
    def ap(self) -> float | None:
        """AP averaged over IoU 0.50:0.05:0.95."""
        if self.ap_per_iou is None:
            return None
        return float(np.mean(self.ap_per_iou))

    @property
    def ap50(self) -> float | None:
        return None if self.ap_per_iou is None else self.ap_per_iou[0]

    @property
    def ap75(self) -> float | None:
        return None if self.ap_per_iou is None else self.ap_per_iou[5]

    def metric(self, name: str) -> float | None:
        value: float | None = getattr(self, name)
        return value


@dataclass(frozen=True)
class GroupMetrics:
    """Means over one class group; None when no class of the group has ground truth."""

    ap: float | None
    ap50: float | None
    ap75: float | None
    num_classes: int


@dataclass(frozen=True)
class EvalReport:
    """
    COCO-protocol evaluation of one stage.

    Attributes:
        per_class: class_id -> ClassResult for every evaluated class
        previous_classes: Classes of earlier stages
        current_classes: Classes of the evaluated stage
        stage: 1-based stage the report belongs to
    """

    per_class: Mapping[int, ClassResult]
    previous_classes: frozenset[int] = field(default_factory=frozenset)
    current_classes: frozenset[int] = field(default_factory=frozenset)
    stage: int = 1

    def result(self, class_id: int) -> ClassResult:
        try:
            return self.per_class[class_id]
        except KeyError as e:
            raise ClassNotInReportError(class_id) from e

    def _results(self, classes: Iterable[int]) -> list[ClassResult]:
        return [self.per_class[c] for c in sorted(classes) if c in self.per_class]

    @property
    def map(self) -> float | None:
        return mean_defined(r.ap for r in self.per_class.values())

    @property
    def map50(self) -> float | None:
        return mean_defined(r.ap50 for r in self.per_class.values())

    @property
    def map75(self) -> float | None:
        return mean_defined(r.ap75 for r in self.per_class.values())

    @property
    def map_small(self) -> float | None:
        return mean_defined(r.ap_small for r in self.per_class.values())

    @property
    def map_medium(self) -> float | None:
        return mean_defined(r.ap_medium for r in self.per_class.values())

    @property
    def map_large(self) -> float | None:
        return mean_defined(r.ap_large for r in self.per_class.values())

    def group(self, classes: Iterable[int]) -> GroupMetrics:
        results = self._results(classes)
        return GroupMetrics(
            ap=mean_defined(r.ap for r in results),
            ap50=mean_defined(r.ap50 for r in results),
            ap75=mean_defined(r.ap75 for r in results),
            num_classes=sum(1 for r in results if r.ap is not None),
        )

    @property
    def previous(self) -> GroupMetrics:
        return self.group(self.previous_classes)

    @property
    def current(self) -> GroupMetrics:
        return self.group(self.current_classes)

    @property
    def overall(self) -> GroupMetrics:
        return self.group(self.per_class)

    def summary(self) -> dict[str, float | None]:
        """Flat metric map, keys as used in reports and forgetting curves."""
        previous, current, overall = self.previous, self.current, self.overall
        return {
            "mAP": self.map,
            "mAP50": self.map50,
            "mAP75": self.map75,
            "mAP_s": self.map_small,
            "mAP_m": self.map_medium,
            "mAP_l": self.map_large,
            "mAP_P": previous.ap,
            "mAP_P50": previous.ap50,
            "mAP_C": current.ap,
            "mAP_C50": current.ap50,
            "mAP_A": overall.ap,
            "mAP_A50": overall.ap50,
            "mAP_A75": overall.ap75,
        }
