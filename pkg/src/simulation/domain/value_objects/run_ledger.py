from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from src.detection_loss.domain.value_objects.loss_breakdown import LossBreakdown
from src.simulation.domain.value_objects.train_config import TrainingMode


@dataclass(frozen=True)
class StageRecord:
    """
    What one stage of one mode produced.

    Attributes:
        stage: 1-based stage
        epoch_losses: Per-epoch mean loss per training image
        summary: Evaluation summary after the stage (EvalReport.summary keys)
        thresholds: Final pseudo-label threshold per old class, empty without a teacher
        num_pseudo_labels: Pseudo-labels used in the last epoch
    """

    stage: int
    epoch_losses: tuple[LossBreakdown, ...]
    summary: Mapping[str, float | None] = field(default_factory=dict)
    thresholds: Mapping[int, float] = field(default_factory=dict)
    num_pseudo_labels: int = 0


@dataclass(frozen=True)
class RunLedger:
    """
    Complete record of one simulated training run.

    Replaying the same config and seed reproduces it exactly, whatever the
    worker count.

    Attributes:
        mode: Loss components used from stage 2 on
        seed: World seed
        config: Resolved configuration snapshot, by section
        stages: One record per stage, ascending
    """

    mode: TrainingMode
    seed: int
    config: Mapping[str, Any]
    stages: tuple[StageRecord, ...]

    @property
    def final(self) -> StageRecord:
        return self.stages[-1]

    def metric(self, name: str) -> list[float | None]:
        """One summary metric per stage, e.g. metric("mAP_P")."""
        return [record.summary.get(name) for record in self.stages]
