import numpy as np
import pytest

from src.detection_loss.domain.exceptions import DetectionLossError, InvalidTargetsError
from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.detection_loss.domain.value_objects.target_set import TargetSet
from src.shared.domain.value_objects.annotation import Annotation
from src.shared.domain.value_objects.bbox import BBox


def test_from_annotations_normalizes_and_keeps_pseudo_flags() -> None:
    annotations = [
        Annotation(1, BBox(0, 0, 100, 50), 2),
        Annotation(1, BBox(100, 50, 100, 50), 0, is_pseudo=True, score=0.9),
    ]

    targets = TargetSet.from_annotations(annotations, 200, 100)

    assert len(targets) == 2
    assert targets.class_ids.tolist() == [2, 0]
    assert targets.boxes[0] == pytest.approx([0.25, 0.25, 0.5, 0.5])
    assert targets.is_pseudo.tolist() == [False, True]


def test_from_no_annotations_is_empty() -> None:
    assert len(TargetSet.from_annotations([], 10, 10)) == 0


def test_permuted_reorders_every_field() -> None:
    targets = TargetSet(np.array([0, 1]), np.array([[0.1] * 4, [0.2] * 4]), np.array([True, False]))

    swapped = targets.permuted([1, 0])

    assert swapped.class_ids.tolist() == [1, 0]
    assert swapped.is_pseudo.tolist() == [False, True]
    assert swapped.boxes[0, 0] == pytest.approx(0.2)


def test_length_mismatch_is_rejected() -> None:
    with pytest.raises(InvalidTargetsError, match="disagree"):
        TargetSet(np.array([0, 1]), np.full((1, 4), 0.5), np.array([False, False]))


def test_degenerate_target_box_is_rejected() -> None:
    with pytest.raises(InvalidTargetsError):
        TargetSet(np.array([0]), np.array([[0.5, 0.5, 0.0, 0.1]]), np.array([False]))


def test_loss_config_rejects_out_of_range_values() -> None:
    with pytest.raises(DetectionLossError):
        SetLossConfig(focal_alpha=1.0)
    with pytest.raises(DetectionLossError):
        SetLossConfig(cost_bbox=-1.0)
