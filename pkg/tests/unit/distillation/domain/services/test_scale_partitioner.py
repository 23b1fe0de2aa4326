import numpy as np

from src.distillation.domain.services.scale_partitioner import partition, partition_boxes
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection
from src.shared.domain.value_objects.query_batch import QueryBatch
from src.shared.domain.value_objects.scale import ScaleBucket, ScaleConfig


def _batch(sides: list[float]) -> QueryBatch:
    detections = tuple(
        Detection(BBox(0, 0, side, side), 0.5, 0, query_index=q) for q, side in enumerate(sides)
    )
    return QueryBatch(np.zeros((len(sides), 2)), detections)


def test_boundary_areas_follow_half_open_ranges() -> None:
    part = partition(_batch([30, 32, 96]), ScaleConfig())

    assert part.small == (0,)
    assert part.medium == (1,)
    assert part.large == (2,)


def test_buckets_are_disjoint_and_cover_every_query() -> None:
    sides = [5, 200, 40, 10, 99, 50, 31]

    part = partition(_batch(sides), ScaleConfig())

    routed = [i for _, indices in part.items() for i in indices]
    assert sorted(routed) == list(range(len(sides)))
    assert len(set(routed)) == len(sides)
    assert part.size == len(sides)


def test_empty_buckets_are_legal() -> None:
    part = partition(_batch([5, 6]), ScaleConfig())

    assert part.indices(ScaleBucket.MEDIUM) == ()
    assert part.indices(ScaleBucket.LARGE) == ()


def test_custom_thresholds_move_the_boundaries() -> None:
    part = partition_boxes([BBox(0, 0, 10, 10), BBox(0, 0, 20, 20)], ScaleConfig(20, 90))

    assert part.medium == ()
    assert part.large == (0, 1)
