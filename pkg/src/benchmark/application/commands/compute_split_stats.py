import logging
from dataclasses import dataclass
from pathlib import Path

from injector import inject

from src.benchmark.domain.services.stage_builder import cooccurrence_stats
from src.benchmark.domain.value_objects.named_schedule import NamedSchedule
from src.benchmark.domain.value_objects.split_stats import SplitStats
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComputeSplitStatsCommand:
    gt_path: Path
    schedule: NamedSchedule
    stages: tuple[int, ...] | None = None


class ComputeSplitStatsHandler:
    """Counts Only-Old / Only-New / Co-occurrence images per stage."""

    @inject
    def __init__(self, datasets: CocoDatasetRepository) -> None:
        self._datasets = datasets

    def handle(self, command: ComputeSplitStatsCommand) -> list[SplitStats]:
        gt = self._datasets.load(command.gt_path)
        schedule = command.schedule.resolve(gt.categories)
        stages = command.stages or tuple(range(1, schedule.num_stages + 1))
        stats = [cooccurrence_stats(gt, schedule, stage) for stage in stages]
        logger.info("Computed split statistics for %d stages of %s", len(stats), schedule.name)
        return stats
