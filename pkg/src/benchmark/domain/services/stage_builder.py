"""
Stage datasets and co-occurrence statistics.

At stage t only instances of C_t are annotated. An image is part of the
stage's training set iff it contains at least one C_t instance; old-class
objects in such images stay in the pixels but lose their annotations.
"""

import logging
from typing import Any

from src.benchmark.domain.value_objects.split_stats import SplitStats
from src.benchmark.domain.value_objects.task_schedule import TaskSchedule
from src.shared.domain.entities.coco_dataset import CocoDataset

logger = logging.getLogger(__name__)


def build_stage_dataset(gt: CocoDataset, schedule: TaskSchedule, stage: int) -> CocoDataset:
    """
    Training set of one stage.

    Returns:
        Dataset keeping images with a C_t instance, annotations of C_t only,
        every category, and provenance (source hash, schedule, stage,
        stage classes) in info

    Raises:
        UnknownStageError: If stage is outside the schedule
        UnknownCategoryError: If a scheduled class is not a dataset category
    """
    schedule.validate_against(gt.category_ids)
    current = schedule.classes(stage)

    annotations = [a for a in gt.annotations if a.class_id in current]
    image_ids = {a.image_id for a in annotations}

    info: dict[str, Any] = dict(gt.info)
    info.update(
        {
            "source_sha256": gt.source_sha256,
            "schedule": schedule.name,
            "stage": stage,
            "stage_classes": sorted(current),
        }
    )
    logger.debug(
        "Stage %d of %s: %d images, %d annotations",
        stage,
        schedule.name,
        len(image_ids),
        len(annotations),
    )
    return gt.restricted(image_ids, annotations, info=info)


def cooccurrence_stats(gt: CocoDataset, schedule: TaskSchedule, stage: int) -> SplitStats:
    """
    Count Only-Old, Only-New and Co-occurrence images of a stage.

    Classes scheduled after the stage are ignored. At stage 1 there are no
    old classes, so Only-Old and Co-occurrence are both 0.

    Raises:
        UnknownStageError: If stage is outside the schedule
        UnknownCategoryError: If a scheduled class is not a dataset category
    """
    schedule.validate_against(gt.category_ids)
    current = schedule.classes(stage)
    old = schedule.old_classes(stage)

    only_old = only_new = both = 0
    for classes in gt.classes_by_image().values():
        has_new = bool(classes & current)
        has_old = bool(classes & old)
        if has_new and has_old:
            both += 1
        elif has_new:
            only_new += 1
        elif has_old:
            only_old += 1

    return SplitStats(stage=stage, only_old=only_old, only_new=only_new, cooccurrence=both)
