import math

import pytest

from src.shared.domain.exceptions import InvalidDetectionError
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection


def test_detection_defaults() -> None:
    detection = Detection(BBox(0, 0, 10, 10), 0.8, 3)

    assert detection.query_index == 0
    assert detection.image_id is None


@pytest.mark.parametrize("score", [-0.01, 1.01, math.nan])
def test_detection_rejects_score_outside_unit_interval(score: float) -> None:
    with pytest.raises(InvalidDetectionError, match="score"):
        Detection(BBox(0, 0, 10, 10), score, 1)


def test_detection_rejects_negative_class_id() -> None:
    with pytest.raises(InvalidDetectionError, match="Class id"):
        Detection(BBox(0, 0, 10, 10), 0.5, -1)


def test_detection_rejects_negative_query_index() -> None:
    with pytest.raises(InvalidDetectionError, match="Query index"):
        Detection(BBox(0, 0, 10, 10), 0.5, 1, query_index=-2)


def test_annotation_defaults_to_ground_truth() -> None:
    annotation = Annotation(7, BBox(0, 0, 5, 5), 2)

    assert annotation.is_pseudo is False
    assert annotation.score is None
    assert annotation.annotation_id is None


def test_annotation_rejects_negative_class_id() -> None:
    with pytest.raises(InvalidDetectionError):
        Annotation(7, BBox(0, 0, 5, 5), -1)
