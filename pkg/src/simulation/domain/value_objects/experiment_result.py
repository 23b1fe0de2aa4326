from collections.abc import Mapping
from dataclasses import dataclass, field

from src.evaluation.domain.value_objects.eval_report import EvalReport
from src.simulation.domain.value_objects.run_ledger import RunLedger

FORGETTING_METRICS = ("mAP_A", "mAP_P", "mAP_C")


@dataclass(frozen=True)
class ExperimentResult:
    """
    Ledgers and evaluation reports of every mode of one simulated experiment.

    Attributes:
        ledgers: mode -> ledger
        reports: (mode, stage) -> evaluation report after that stage
        class_names: class_id -> display name
    """

    ledgers: Mapping[str, RunLedger]
    reports: Mapping[tuple[str, int], EvalReport]
    class_names: Mapping[int, str] = field(default_factory=dict)

    def forgetting_curve(self) -> list[tuple[str, int, float | None, float | None, float | None]]:
        """(mode, stage, mAP_A, mAP_P, mAP_C) rows, modes in run order, stages ascending."""
        rows: list[tuple[str, int, float | None, float | None, float | None]] = []
        for mode, ledger in self.ledgers.items():
            for record in ledger.stages:
                a, p, c = (record.summary.get(name) for name in FORGETTING_METRICS)
                rows.append((mode, record.stage, a, p, c))
        return rows
