"""
Unit tests for GeneratePseudoLabelsHandler.

Test Strategy:
    - Mock all repositories (no file I/O)
    - Verify the counts in the returned summary
    - Verify what gets saved: augmented dataset and updated banks
"""

from pathlib import Path
from unittest.mock import Mock

import pytest

from src.pseudo_label.application.commands.generate_pseudo_labels import (
    GeneratePseudoLabelsCommand,
    GeneratePseudoLabelsHandler,
)
from src.pseudo_label.domain.repositories.score_bank_repository import ScoreBankRepository
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig
from src.pseudo_label.domain.value_objects.threshold_table import Provenance
from src.shared.domain.entities.coco_dataset import CocoDataset
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository
from src.shared.domain.repositories.detection_stream_repository import (
    DetectionStreamRepository,
)
from src.shared.domain.value_objects.bbox import BBox
from src.shared.domain.value_objects.detection import Detection

COMMAND = GeneratePseudoLabelsCommand(
    gt_path=Path("gt.json"),
    detections_path=Path("teacher.txt"),
    bank_path=Path("banks.json"),
    out_path=Path("out.json"),
    old_classes=frozenset({1}),
)


@pytest.fixture
def teacher_stream() -> list[Detection]:
    return [
        # duplicate of the person ground truth on image 1
        Detection(BBox(10, 10, 50, 80), 0.9, 1, query_index=0, image_id=1),
        Detection(BBox(500, 300, 30, 60), 0.95, 1, query_index=0, image_id=2),
        Detection(BBox(0, 0, 30, 60), 0.35, 1, query_index=1, image_id=2),
        Detection(BBox(0, 0, 30, 60), 0.99, 2, query_index=2, image_id=2),
        Detection(BBox(0, 0, 30, 60), 0.99, 1, query_index=0, image_id=99),
    ]


@pytest.fixture
def repositories(
    small_dataset: CocoDataset, teacher_stream: list[Detection]
) -> tuple[Mock, Mock, Mock]:
    datasets = Mock(spec=CocoDatasetRepository)
    datasets.load.return_value = small_dataset
    detections = Mock(spec=DetectionStreamRepository)
    detections.load.return_value = teacher_stream
    banks = Mock(spec=ScoreBankRepository)
    banks.load.return_value = {}
    return datasets, detections, banks


@pytest.fixture
def handler(repositories: tuple[Mock, Mock, Mock]) -> GeneratePseudoLabelsHandler:
    return GeneratePseudoLabelsHandler(*repositories, config=CpgConfig())


def test_handle_counts_selected_and_kept_pseudo_labels(
    handler: GeneratePseudoLabelsHandler,
) -> None:
    summary = handler.handle(COMMAND)

    assert summary.num_detections == 4
    assert summary.num_selected == 2
    assert summary.num_kept == 1
    assert summary.thresholds.entries[1].provenance is Provenance.FALLBACK


def test_handle_saves_dataset_with_new_pseudo_labels(
    handler: GeneratePseudoLabelsHandler,
    repositories: tuple[Mock, Mock, Mock],
    small_dataset: CocoDataset,
) -> None:
    datasets, _, _ = repositories

    handler.handle(COMMAND)

    saved, path = datasets.save.call_args.args
    assert path == Path("out.json")
    assert len(saved.annotations) == len(small_dataset.annotations) + 1
    (pseudo,) = [a for a in saved.annotations if a.is_pseudo]
    assert pseudo.image_id == 2
    assert pseudo.score == 0.95
    assert pseudo.annotation_id == 7


def test_handle_saves_updated_banks_for_old_classes_only(
    handler: GeneratePseudoLabelsHandler, repositories: tuple[Mock, Mock, Mock]
) -> None:
    _, _, banks = repositories

    handler.handle(COMMAND)

    banks.load.assert_called_once_with(Path("banks.json"))
    saved, path = banks.save.call_args.args
    assert path == Path("banks.json")
    assert set(saved) == {1}
    assert saved[1].scores.tolist() == [0.9, 0.95, 0.35]


def test_handle_warns_about_detections_on_unknown_images(
    handler: GeneratePseudoLabelsHandler, caplog: pytest.LogCaptureFixture
) -> None:
    handler.handle(COMMAND)

    assert "Ignoring 1 detections" in caplog.text
