from pydantic import BaseModel, ConfigDict, Field


class ClassResultDTO(BaseModel):
    model_config = ConfigDict(extra="forbid")

    class_id: int
    name: str = ""
    num_gt: int
    ap: float | None = None
    ap50: float | None = None
    ap75: float | None = None
    ap_per_iou: list[float] | None = None
    ap_small: float | None = None
    ap_medium: float | None = None
    ap_large: float | None = None


class EvalReportDTO(BaseModel):
    """JSON layout of an evaluation report; AP values are fractions in [0, 1]."""

    model_config = ConfigDict(extra="forbid")

    stage: int
    previous_classes: list[int] = Field(default_factory=list)
    current_classes: list[int] = Field(default_factory=list)
    summary: dict[str, float | None] = Field(default_factory=dict)
    per_class: list[ClassResultDTO] = Field(default_factory=list)
