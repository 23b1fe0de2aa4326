from src.detection_loss.domain.value_objects.loss_breakdown import LossBreakdown
from src.simulation.domain.value_objects.run_ledger import RunLedger, StageRecord
from src.simulation.domain.value_objects.train_config import TrainingMode
from src.simulation.infrastructure.persistence.run_ledger_dtos import (
    LossBreakdownDTO,
    RunLedgerDTO,
    StageRecordDTO,
)


def to_persistence(ledger: RunLedger) -> RunLedgerDTO:
    return RunLedgerDTO(
        mode=ledger.mode.value,
        seed=ledger.seed,
        config=dict(ledger.config),
        stages=[
            StageRecordDTO(
                stage=record.stage,
                epochs=[
                    LossBreakdownDTO(
                        epoch=epoch,
                        detr=loss.detr,
                        std=loss.std,
                        crd=loss.crd,
                        align=loss.align,
                        reg=loss.reg,
                        lambda1=loss.lambda1,
                        total=loss.total,
                    )
                    for epoch, loss in enumerate(record.epoch_losses, start=1)
                ],
                summary=dict(record.summary),
                thresholds=dict(sorted(record.thresholds.items())),
                num_pseudo_labels=record.num_pseudo_labels,
            )
            for record in ledger.stages
        ],
    )


def to_domain(dto: RunLedgerDTO) -> RunLedger:
    return RunLedger(
        mode=TrainingMode(dto.mode),
        seed=dto.seed,
        config=dto.config,
        stages=tuple(
            StageRecord(
                stage=stage.stage,
                epoch_losses=tuple(
                    LossBreakdown(
                        detr=e.detr,
                        std=e.std,
                        crd=e.crd,
                        total=e.total,
                        align=e.align,
                        reg=e.reg,
                        lambda1=e.lambda1,
                    )
                    for e in stage.epochs
                ),
                summary=stage.summary,
                thresholds=stage.thresholds,
                num_pseudo_labels=stage.num_pseudo_labels,
            )
            for stage in dto.stages
        ),
    )
