"""
RunExperiment command and handler.

Business Rules:
    - Stage 1 is trained once (ground truth only) and shared by every mode
    - From stage 2 on each mode trains its own head, with the previous
      stage's head of the same mode as frozen teacher
    - After every stage the head is evaluated on the test images of all
      tasks seen so far, restricted to the seen classes
    - The ledger's config snapshot leaves out the [io] section, so the worker
      count and output directory never change a ledger

Command Flow:
    1. Apply seed/mode overrides and generate the world
    2. Train and evaluate stage 1
    3. For each mode, train and evaluate stages 2..T
    4. Persist ledgers, reports and plot-data tables
"""

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path

from injector import inject

from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.evaluation.domain.services.coco_evaluator import evaluate
from src.evaluation.domain.value_objects.eval_report import EvalReport
from src.evaluation.domain.value_objects.evaluation_config import EvaluationConfig
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig
from src.shared.domain.value_objects.detection import Detection
from src.shared.domain.value_objects.scale import ScaleConfig
from src.shared.infrastructure.config.run_config import RunConfig
from src.simulation.domain.entities.student_head import StudentHead
from src.simulation.domain.entities.world import World, generate_world
from src.simulation.domain.repositories.experiment_output_repository import (
    ExperimentOutputRepository,
)
from src.simulation.domain.services.trainer import (
    StageOutcome,
    StageSettings,
    predict,
    train_stage,
)
from src.simulation.domain.value_objects.experiment_result import ExperimentResult
from src.simulation.domain.value_objects.run_ledger import RunLedger, StageRecord
from src.simulation.domain.value_objects.train_config import TrainConfig, TrainingMode
from src.simulation.domain.value_objects.world_config import WorldConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunExperimentCommand:
    """
    Attributes:
        out_dir: Output directory; None uses [io] out_dir
        modes: Modes to run; None uses [train] modes
        seed: World seed; None uses [world] seed
        workers: Threads for per-image work and evaluation; None uses
            [io] workers; 0 means one per CPU
    """

    out_dir: Path | None = None
    modes: tuple[str, ...] | None = None
    seed: int | None = None
    workers: int | None = None


@dataclass(frozen=True)
class ExperimentOutcome:
    result: ExperimentResult
    effective_config: RunConfig
    out_dir: Path
    written: list[Path]


def resolve_workers(workers: int) -> int:
    """0 means one worker per CPU."""
    return workers if workers > 0 else (os.cpu_count() or 1)


class RunExperimentHandler:
    @inject
    def __init__(
        self,
        config: RunConfig,
        world: WorldConfig,
        train: TrainConfig,
        scale: ScaleConfig,
        loss: SetLossConfig,
        std: StdConfig,
        crd: CrdConfig,
        cpg: CpgConfig,
        evaluation: EvaluationConfig,
        outputs: ExperimentOutputRepository,
    ) -> None:
        self._config = config
        self._world = world
        self._train = train
        self._scale = scale
        self._loss = loss
        self._std = std
        self._crd = crd
        self._cpg = cpg
        self._evaluation = evaluation
        self._outputs = outputs

    def _effective_config(self, command: RunExperimentCommand) -> RunConfig:
        config = self._config
        updates: dict[str, object] = {}
        if command.seed is not None:
            updates["world"] = config.world.model_copy(update={"seed": command.seed})
        if command.modes is not None:
            updates["train"] = config.train.model_copy(update={"modes": tuple(command.modes)})
        io_updates: dict[str, object] = {}
        if command.out_dir is not None:
            io_updates["out_dir"] = str(command.out_dir)
        if command.workers is not None:
            io_updates["workers"] = command.workers
        if io_updates:
            updates["io"] = config.io.model_copy(update=io_updates)
        return config.model_copy(update=updates)

    def _settings(self, mode: TrainingMode, old: frozenset[int], workers: int) -> StageSettings:
        return StageSettings(
            mode=mode,
            old_classes=old,
            train=self._train,
            loss=self._loss,
            std=self._std,
            crd=self._crd,
            cpg=self._cpg,
            scale=self._scale,
            workers=workers,
        )

    def _evaluate(self, head: StudentHead, world: World, stage: int, workers: int) -> EvalReport:
        seen = world.schedule.seen_classes(stage)
        detections: list[Detection] = []
        for task in world.test[:stage]:
            for image in task:
                detections.extend(predict(head, image, seen))
        return evaluate(
            detections,
            world.eval_dataset(stage),
            world.schedule,
            stage,
            scale=self._scale,
            max_detections=self._evaluation.max_detections,
            workers=workers,
        )

    @staticmethod
    def _record(stage: int, outcome: StageOutcome, report: EvalReport) -> StageRecord:
        thresholds = (
            {entry.class_id: entry.tau for entry in outcome.thresholds}
            if outcome.thresholds is not None
            else {}
        )
        return StageRecord(
            stage=stage,
            epoch_losses=outcome.epoch_losses,
            summary=report.summary(),
            thresholds=thresholds,
            num_pseudo_labels=outcome.num_pseudo_labels,
        )

    def handle(self, command: RunExperimentCommand) -> ExperimentOutcome:
        """
        Raises:
            InvalidTrainConfigError: If a requested mode is unknown
            InvalidWorldConfigError: If the world settings are inconsistent
        """
        effective = self._effective_config(command)
        modes = [TrainingMode.parse(m) for m in effective.train.modes]
        workers = resolve_workers(effective.io.workers)
        out_dir = Path(effective.io.out_dir)
        world_cfg = replace(self._world, seed=effective.world.seed)
        snapshot = effective.model_dump(mode="json", exclude={"io"})

        world = generate_world(world_cfg, self._scale)
        schedule = world.schedule
        logger.debug(
            "Running %d stages for modes %s with %d worker(s)",
            schedule.num_stages,
            [m.value for m in modes],
            workers,
        )

        initial = StudentHead.initial(world_cfg.num_classes, world_cfg.feature_dim, world_cfg.seed)
        first = train_stage(
            initial,
            None,
            world.train[0],
            self._settings(TrainingMode.FINETUNE, frozenset(), workers),
        )
        first_report = self._evaluate(first.head, world, 1, workers)
        first_record = self._record(1, first, first_report)

        ledgers: dict[str, RunLedger] = {}
        reports: dict[tuple[str, int], EvalReport] = {}
        for mode in modes:
            head = first.head
            records = [first_record]
            reports[(mode.value, 1)] = first_report
            for stage in range(2, schedule.num_stages + 1):
                teacher = head.frozen_copy()
                outcome = train_stage(
                    head,
                    teacher,
                    world.train[stage - 1],
                    self._settings(mode, schedule.old_classes(stage), workers),
                )
                head = outcome.head
                report = self._evaluate(head, world, stage, workers)
                reports[(mode.value, stage)] = report
                records.append(self._record(stage, outcome, report))
                logger.debug(
                    "Mode %s stage %d: mAP_P %s, mAP_C %s",
                    mode.value,
                    stage,
                    report.previous.ap,
                    report.current.ap,
                )
            ledgers[mode.value] = RunLedger(
                mode=mode, seed=world_cfg.seed, config=snapshot, stages=tuple(records)
            )

        result = ExperimentResult(
            ledgers=ledgers,
            reports=reports,
            class_names={c.category_id: c.name for c in world.categories},
        )
        written = self._outputs.save(result, out_dir)
        logger.info(
            "Simulated %d mode(s) over %d stage(s), wrote %d files to %s",
            len(modes),
            schedule.num_stages,
            len(written),
            out_dir,
        )
        return ExperimentOutcome(
            result=result, effective_config=effective, out_dir=out_dir, written=written
        )
