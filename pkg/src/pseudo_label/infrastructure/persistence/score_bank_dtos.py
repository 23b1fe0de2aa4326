from pydantic import BaseModel, ConfigDict, Field


class ScoreBankDTO(BaseModel):
    model_config = ConfigDict(extra="forbid")

    class_id: int
    capacity: int = Field(ge=1)
    delta_min: float
    scores: list[float]


class ScoreBankFileDTO(BaseModel):
    """Bank state sidecar: one entry per old class, scores oldest first."""

    model_config = ConfigDict(extra="forbid")

    version: int = 1
    banks: list[ScoreBankDTO] = Field(default_factory=list)
