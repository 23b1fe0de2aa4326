"""
GeneratePseudoLabels command and handler.

Turns a teacher detection stream over current-task images into pseudo
annotations for the old classes and merges them into the current-task
ground-truth file.

Business Rules:
    - Bank candidates are teacher scores above delta_min on old classes only
    - Thresholds come from the updated banks (or the fixed fallback)
    - A prediction becomes a pseudo-label iff score >= tau of its class
    - Pseudo-labels overlapping current-task ground truth at IoU >= theta_nms are dropped
    - Bank state is written back so the next batch continues from it

Command Flow:
    1. Load ground truth, teacher detections and bank state
    2. Update banks with this batch's candidates
    3. Build the threshold table
    4. Select pseudo-labels, then de-duplicate against ground truth
    5. Save the augmented dataset and the banks
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from injector import inject

from src.pseudo_label.domain.repositories.score_bank_repository import ScoreBankRepository
from src.pseudo_label.domain.services.pseudo_labeler import (
    deduplicate,
    generate_pseudo_labels,
    update_banks,
)
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig
from src.pseudo_label.domain.value_objects.threshold_table import ThresholdTable
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository
from src.shared.domain.repositories.detection_stream_repository import (
    DetectionStreamRepository,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratePseudoLabelsCommand:
    """
    Attributes:
        gt_path: Current-task COCO file
        detections_path: Teacher detection stream over the same images
        bank_path: Bank state sidecar (created when missing)
        out_path: Augmented COCO file to write
        old_classes: Classes learned in earlier stages
    """

    gt_path: Path
    detections_path: Path
    bank_path: Path
    out_path: Path
    old_classes: frozenset[int]


@dataclass(frozen=True)
class PseudoLabelSummary:
    thresholds: ThresholdTable
    num_detections: int
    num_selected: int
    num_kept: int


class GeneratePseudoLabelsHandler:
    """
    Handler for the GeneratePseudoLabels command.

    Framework-agnostic: the CLI adapter builds the command and renders the
    returned summary; tests drive it with mocked repositories.
    """

    @inject
    def __init__(
        self,
        datasets: CocoDatasetRepository,
        detections: DetectionStreamRepository,
        banks: ScoreBankRepository,
        config: CpgConfig,
    ) -> None:
        self._datasets = datasets
        self._detections = detections
        self._banks = banks
        self._config = config

    def handle(self, command: GeneratePseudoLabelsCommand) -> PseudoLabelSummary:
        """
        Raises:
            MissingThresholdError: Never for classes in command.old_classes,
                every one of them receives a threshold
            MalformedRecordError: If an input file cannot be parsed
            OSError: If an input file cannot be read
        """
        dataset = self._datasets.load(command.gt_path)
        known_images = {image.image_id for image in dataset.images}
        stream = self._detections.load(command.detections_path)
        teacher_preds = [d for d in stream if d.image_id in known_images]
        if len(teacher_preds) != len(stream):
            logger.warning(
                "Ignoring %d detections on images absent from %s",
                len(stream) - len(teacher_preds),
                command.gt_path,
            )

        banks = update_banks(
            self._banks.load(command.bank_path),
            teacher_preds,
            command.old_classes,
            self._config,
        )
        thresholds = ThresholdTable.build(banks, command.old_classes, self._config)

        selected = generate_pseudo_labels(teacher_preds, thresholds, command.old_classes)
        gt = [a for a in dataset.annotations if not a.is_pseudo]
        kept = deduplicate(selected, gt, self._config.theta_nms)

        self._datasets.save(dataset.with_additional_annotations(kept), command.out_path)
        self._banks.save(banks, command.bank_path)

        logger.info(
            "Wrote %s: %d pseudo-labels kept of %d selected from %d detections",
            command.out_path,
            len(kept),
            len(selected),
            len(teacher_preds),
        )
        return PseudoLabelSummary(
            thresholds=thresholds,
            num_detections=len(teacher_preds),
            num_selected=len(selected),
            num_kept=len(kept),
        )
