"""
SplitDataset command and handler.

Writes one COCO file per requested stage of a schedule, each holding only
the stage's images and annotations, plus a copy of the resolved schedule.

Command Flow:
    1. Load the source COCO file
    2. Resolve schedule class names against its categories
    3. Build and save every requested stage dataset
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from injector import inject

from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.domain.services.stage_builder import build_stage_dataset
from src.benchmark.domain.value_objects.named_schedule import NamedSchedule
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitDatasetCommand:
    """
    Attributes:
        gt_path: Source COCO file
        schedule: Schedule by class name
        out_dir: Output directory
        stages: 1-based stages to write; None writes all
    """

    gt_path: Path
    schedule: NamedSchedule
    out_dir: Path
    stages: tuple[int, ...] | None = None


class SplitDatasetHandler:
    @inject
    def __init__(self, datasets: CocoDatasetRepository, schedules: ScheduleRepository) -> None:
        self._datasets = datasets
        self._schedules = schedules

    def handle(self, command: SplitDatasetCommand) -> list[Path]:
        """
        Returns:
            Paths of the written stage files, in stage order

        Raises:
            UnknownCategoryError: If a schedule class is absent from the source
            UnknownStageError: If a requested stage is outside the schedule
        """
        gt = self._datasets.load(command.gt_path)
        schedule = command.schedule.resolve(gt.categories)
        stages = command.stages or tuple(range(1, schedule.num_stages + 1))

        written: list[Path] = []
        for stage in stages:
            stage_dataset = build_stage_dataset(gt, schedule, stage)
            path = command.out_dir / f"{schedule.name}_stage{stage}.json"
            self._datasets.save(stage_dataset, path)
            written.append(path)

        self._schedules.save(command.schedule, command.out_dir / f"{schedule.name}.schedule")
        logger.info("Wrote %d stage files to %s", len(written), command.out_dir)
        return written
