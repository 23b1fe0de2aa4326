"""
Integration tests for FileExperimentOutputRepository.

Test Strategy:
    - Hand-built ledgers and reports written under tmp_path
    - Ledgers load back equal, including undefined metrics
    - CSV tables have one row per (mode, stage) and per recall point
"""

import csv
from pathlib import Path

import pytest

from src.detection_loss.domain.value_objects.loss_breakdown import LossBreakdown
from src.evaluation.domain.value_objects.eval_report import RECALL_POINTS, ClassResult, EvalReport
from src.shared.domain.exceptions import MalformedRecordError
from src.simulation.domain.value_objects.experiment_result import ExperimentResult
from src.simulation.domain.value_objects.run_ledger import RunLedger, StageRecord
from src.simulation.domain.value_objects.train_config import TrainingMode
from src.simulation.infrastructure.persistence.file_experiment_output_repository import (
    FileExperimentOutputRepository,
    ledger_name,
    report_name,
)


@pytest.fixture
def result() -> ExperimentResult:
    ledger = RunLedger(
        mode=TrainingMode.FULL,
        seed=3,
        config={"world": {"seed": 3}},
        stages=(
            StageRecord(
                1,
                (LossBreakdown(detr=1.5, std=0.0, crd=0.0, total=1.5),),
                {"mAP_A": 0.5, "mAP_P": None, "mAP_C": 0.5},
            ),
            StageRecord(
                2,
                (LossBreakdown(detr=1.0, std=0.1, crd=0.2, total=1.5, align=0.15, reg=0.05),),
                {"mAP_A": 0.45, "mAP_P": 0.4, "mAP_C": 0.5},
                thresholds={0: 0.61, 1: 0.4},
                num_pseudo_labels=12,
            ),
        ),
    )
    report = EvalReport(
        {0: ClassResult(0, 3, (0.5,) * 10, pr_curve=(1.0,) * len(RECALL_POINTS))},
        current_classes=frozenset({0}),
        stage=1,
    )
    return ExperimentResult(
        ledgers={"full": ledger}, reports={("full", 1): report}, class_names={0: "class_0"}
    )


def test_save_writes_ledgers_reports_and_tables(
    result: ExperimentResult, tmp_path: Path
) -> None:
    written = FileExperimentOutputRepository().save(result, tmp_path / "run")

    assert [p.name for p in written] == [
        ledger_name("full"),
        report_name("full", 1),
        "forgetting_curve.csv",
        "pr_curves.csv",
    ]
    assert all(p.exists() for p in written)


def test_ledger_loads_back_equal(result: ExperimentResult, tmp_path: Path) -> None:
    repository = FileExperimentOutputRepository()
    repository.save(result, tmp_path)

    loaded = repository.load_ledger(tmp_path / ledger_name("full"))

    assert loaded == result.ledgers["full"]


def test_forgetting_curve_leaves_undefined_cells_empty(
    result: ExperimentResult, tmp_path: Path
) -> None:
    FileExperimentOutputRepository().save(result, tmp_path)

    with (tmp_path / "forgetting_curve.csv").open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows == [
        ["mode", "stage", "mAP_A", "mAP_P", "mAP_C"],
        ["full", "1", "0.5", "", "0.5"],
        ["full", "2", "0.45", "0.4", "0.5"],
    ]


def test_pr_curves_table_has_every_recall_point(
    result: ExperimentResult, tmp_path: Path
) -> None:
    FileExperimentOutputRepository().save(result, tmp_path)

    with (tmp_path / "pr_curves.csv").open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    assert len(rows) == 1 + len(RECALL_POINTS)
    assert rows[-1] == ["full", "1", "0", "1.00", "1.000000"]


def test_malformed_ledger_is_rejected(tmp_path: Path) -> None:
    path = tmp_path / "ledger_bad.json"
    path.write_text('{"mode": "full"}', encoding="utf-8")

    with pytest.raises(MalformedRecordError):
        FileExperimentOutputRepository().load_ledger(path)
