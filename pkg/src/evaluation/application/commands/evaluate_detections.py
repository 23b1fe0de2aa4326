"""
EvaluateDetections command and handler.

Command Flow:
    1. Load the fully annotated ground truth and the detection stream
    2. Resolve the schedule against the ground-truth categories
    3. Evaluate the classes seen up to the requested stage
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from injector import inject

from src.benchmark.domain.value_objects.named_schedule import NamedSchedule
from src.evaluation.domain.services.coco_evaluator import evaluate
from src.evaluation.domain.value_objects.eval_report import EvalReport
from src.evaluation.domain.value_objects.evaluation_config import EvaluationConfig
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository
from src.shared.domain.repositories.detection_stream_repository import (
    DetectionStreamRepository,
)
from src.shared.domain.value_objects.scale import ScaleConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvaluateDetectionsCommand:
    """
    Attributes:
        detections_path: Detection stream of the model after current_task
        gt_path: Fully annotated test set
        schedule: Schedule by class name
        current_task: 1-based stage
        workers: Threads for per-class evaluation
    """

    detections_path: Path
    gt_path: Path
    schedule: NamedSchedule
    current_task: int
    workers: int = 1


@dataclass(frozen=True)
class EvaluationOutcome:
    report: EvalReport
    class_names: dict[int, str]


class EvaluateDetectionsHandler:
    @inject
    def __init__(
        self,
        datasets: CocoDatasetRepository,
        detections: DetectionStreamRepository,
        scale: ScaleConfig,
        config: EvaluationConfig,
    ) -> None:
        self._datasets = datasets
        self._detections = detections
        self._scale = scale
        self._config = config

    def handle(self, command: EvaluateDetectionsCommand) -> EvaluationOutcome:
        """
        Raises:
            UnknownCategoryError: If a detection class or schedule name is unknown
            UnknownStageError: If current_task is outside the schedule
        """
        gt = self._datasets.load(command.gt_path)
        schedule = command.schedule.resolve(gt.categories)
        detections = self._detections.load(command.detections_path)

        report = evaluate(
            detections,
            gt,
            schedule,
            command.current_task,
            scale=self._scale,
            max_detections=self._config.max_detections,
            workers=command.workers,
        )
        logger.info(
            "Evaluated %d detections on %d images, stage %d",
            len(detections),
            len(gt.images),
            command.current_task,
        )
        return EvaluationOutcome(
            report=report,
            class_names={c.category_id: c.name for c in gt.categories},
        )
