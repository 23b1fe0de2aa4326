"""
Scale-adaptive instance partitioning.

Routes queries into the small, medium and large subspaces by the area of the
box they predict. During distillation the boxes are the teacher's
predictions; partition_boxes() exists for callers that explicitly want to
route ground-truth boxes instead.
"""

from collections.abc import Iterable

from src.distillation.domain.value_objects.scale_partition import ScalePartition
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.query_batch import QueryBatch
from src.shared.domain.value_objects.scale import ScaleBucket, ScaleConfig


def _partition_areas(areas: Iterable[float], cfg: ScaleConfig) -> ScalePartition:
    routed: dict[ScaleBucket, list[int]] = {bucket: [] for bucket in ScaleBucket}
    for index, area in enumerate(areas):
        routed[cfg.bucket_of(area)].append(index)
    return ScalePartition(
        small=tuple(routed[ScaleBucket.SMALL]),
        medium=tuple(routed[ScaleBucket.MEDIUM]),
        large=tuple(routed[ScaleBucket.LARGE]),
    )


def partition(batch: QueryBatch, cfg: ScaleConfig) -> ScalePartition:
    """
    Split the queries of a batch by the area of their detection boxes.

    Args:
        batch: Queries with their (teacher) detections
        cfg: Area thresholds

    Returns:
        ScalePartition whose buckets are disjoint and cover 0..N-1

    Example:
        A 30x30 box (900) is Small, 32x32 (1024) Medium, 96x96 (9216) Large.
    """
    return _partition_areas((d.bbox.area for d in batch.detections), cfg)


def partition_boxes(boxes: Iterable[BBox], cfg: ScaleConfig) -> ScalePartition:
    """Same routing as partition(), for an explicit list of (e.g. ground-truth) boxes."""
    return _partition_areas((b.area for b in boxes), cfg)
