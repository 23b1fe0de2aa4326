"""
File-backed simulation outputs.

Layout of the output directory:
    ledger_<mode>.json            one RunLedger per mode
    report_<mode>_stage<t>.json   evaluation report after each stage
    forgetting_curve.csv          mode, stage, mAP_A, mAP_P, mAP_C
    pr_curves.csv                 mode, stage, class_id, recall, precision (IoU 0.50)

Undefined metrics are written as empty CSV cells and JSON nulls.
"""

import csv
import logging
from pathlib import Path

from pydantic import ValidationError

from src.evaluation.domain.value_objects.eval_report import RECALL_POINTS
from src.evaluation.infrastructure.persistence.report_writers import write_report_json
from src.shared.domain.exceptions import MalformedRecordError
from src.simulation.domain.repositories.experiment_output_repository import (
    ExperimentOutputRepository,
)
from src.simulation.domain.value_objects.experiment_result import (
    FORGETTING_METRICS,
    ExperimentResult,
)
from src.simulation.domain.value_objects.run_ledger import RunLedger
from src.simulation.infrastructure.persistence.run_ledger_dtos import RunLedgerDTO
from src.simulation.infrastructure.persistence.run_ledger_mapper import (
    to_domain,
    to_persistence,
)

logger = logging.getLogger(__name__)

FORGETTING_CURVE_NAME = "forgetting_curve.csv"
PR_CURVES_NAME = "pr_curves.csv"


def ledger_name(mode: str) -> str:
    return f"ledger_{mode}.json"


def report_name(mode: str, stage: int) -> str:
    return f"report_{mode}_stage{stage}.json"


def _cell(value: float | None) -> str:
    return "" if value is None else repr(value)


class FileExperimentOutputRepository(ExperimentOutputRepository):
    def save(self, result: ExperimentResult, out_dir: Path) -> list[Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []

        for mode, ledger in result.ledgers.items():
            path = out_dir / ledger_name(mode)
            path.write_text(to_persistence(ledger).model_dump_json(indent=2), encoding="utf-8")
            written.append(path)

        for (mode, stage), report in result.reports.items():
            path = out_dir / report_name(mode, stage)
            write_report_json(report, path, result.class_names)
            written.append(path)

        curve_path = out_dir / FORGETTING_CURVE_NAME
        with curve_path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(("mode", "stage", *FORGETTING_METRICS))
            for mode, stage, a, p, c in result.forgetting_curve():
                writer.writerow((mode, stage, _cell(a), _cell(p), _cell(c)))
        written.append(curve_path)

        pr_path = out_dir / PR_CURVES_NAME
        with pr_path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(("mode", "stage", "class_id", "recall", "precision"))
            for (mode, stage), report in result.reports.items():
                for class_id, r in sorted(report.per_class.items()):
                    if r.pr_curve is None:
                        continue
                    for recall, precision in zip(RECALL_POINTS, r.pr_curve, strict=True):
                        writer.writerow(
                            (mode, stage, class_id, f"{recall:.2f}", f"{precision:.6f}")
                        )
        written.append(pr_path)

        logger.debug("Wrote %d simulation outputs to %s", len(written), out_dir)
        return written

    def load_ledger(self, path: Path) -> RunLedger:
        try:
            dto = RunLedgerDTO.model_validate_json(path.read_bytes())
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise MalformedRecordError(1, f"{path}: {location}: {first['msg']}") from e
        return to_domain(dto)
