import math

import pytest

from src.shared.domain.exceptions import InvalidBoxError
from src.shared.domain.value_objects.bbox import BBox


def test_bbox_creation_converts_to_float() -> None:
    box = BBox(1, 2, 3, 4)

    assert box.as_list() == [1.0, 2.0, 3.0, 4.0]
    assert isinstance(box.x, float)


def test_bbox_area_and_corners() -> None:
    box = BBox(10, 20, 30, 40)

    assert box.area == 1200.0
    assert box.to_xyxy() == (10.0, 20.0, 40.0, 60.0)


@pytest.mark.parametrize(("w", "h"), [(0, 10), (10, 0), (-1, 5)])
def test_bbox_rejects_non_positive_size(w: float, h: float) -> None:
    with pytest.raises(InvalidBoxError, match="must be positive"):
        BBox(0, 0, w, h)


def test_bbox_rejects_non_finite_coordinates() -> None:
    with pytest.raises(InvalidBoxError, match="finite"):
        BBox(math.nan, 0, 1, 1)


def test_bbox_rejects_non_numeric_coordinates() -> None:
    with pytest.raises(InvalidBoxError, match="numbers"):
        BBox("a", 0, 1, 1)  # type: ignore[arg-type]


def test_bbox_is_immutable() -> None:
    box = BBox(0, 0, 1, 1)

    with pytest.raises(AttributeError):
        box.x = 5.0  # type: ignore[misc]


def test_bbox_from_xyxy() -> None:
    assert BBox.from_xyxy(5, 5, 15, 25) == BBox(5, 5, 10, 20)


def test_bbox_normalized_center_form() -> None:
    box = BBox(100, 50, 200, 100)

    cx, cy, w, h = box.to_normalized_cxcywh(400, 200)

    assert (cx, cy, w, h) == pytest.approx((0.5, 0.5, 0.5, 0.5))
    assert BBox.from_normalized_cxcywh(cx, cy, w, h, 400, 200) == box


def test_bbox_scaled_scales_positions_and_sizes() -> None:
    assert BBox(1, 2, 3, 4).scaled(2.0) == BBox(2, 4, 6, 8)
