from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class LossBreakdownDTO(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epoch: int
    detr: float
    std: float
    crd: float
    align: float
    reg: float
    lambda1: float
    total: float


class StageRecordDTO(BaseModel):
    model_config = ConfigDict(extra="forbid")

    stage: int
    epochs: list[LossBreakdownDTO] = Field(default_factory=list)
    summary: dict[str, float | None] = Field(default_factory=dict)
    thresholds: dict[int, float] = Field(default_factory=dict)
    num_pseudo_labels: int = 0


class RunLedgerDTO(BaseModel):
    """JSON layout of a ledger; floats are written with full precision."""

    model_config = ConfigDict(extra="forbid")

    mode: str
    seed: int
    config: dict[str, Any] = Field(default_factory=dict)
    stages: list[StageRecordDTO] = Field(default_factory=list)
