"""
Run configuration schema.

Every tunable of the toolkit lives in one RunConfig, split into sections
that mirror the bounded contexts. The on-disk form is an INI document (see
ini_config_loader); this module only defines and validates the schema.

Design Decisions:
    - Pydantic v2 models with extra="forbid": unknown keys are errors
    - Every key has a default; an empty file is a valid config
    - Domain configs (ScaleConfig, StdConfig, ...) are built from these
      sections by the context DI modules, so the domain never imports pydantic
    - Comma-separated INI values are accepted for tuple fields
"""

from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

SIM_MODES = ("finetune", "crd", "cpg", "crd+cpg", "full", "std")


def _split_csv(value: Any) -> Any:
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(",") if part.strip())
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SipSection(_Section):
    tau_s: float = Field(1024.0, gt=0)
    tau_m: float = Field(9216.0, gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "SipSection":
        if self.tau_s >= self.tau_m:
            raise ValueError("tau_s must be smaller than tau_m")
        return self


class StdSection(_Section):
    temperature: float = Field(1.0, gt=0)
    include_background_anchor: bool = True
    weight: float = Field(3.0, ge=0)


class CrdSection(_Section):
    temperature: float = Field(1.0, gt=0)
    bbox_l1_weight: float = Field(5.0, ge=0)
    bbox_giou_weight: float = Field(2.0, ge=0)
    tau_squared: bool = False


class CpgSection(_Section):
    delta_min: float = Field(0.3, gt=0, lt=1)
    capacity: int = Field(20000, ge=1)
    theta_nms: float = Field(0.7, gt=0, le=1)
    min_samples: int = Field(50, ge=2)
    fallback_threshold: float = Field(0.4, gt=0, lt=1)
    strategy: Literal["cluster", "fixed"] = "cluster"

    @model_validator(mode="after")
    def _ordered(self) -> "CpgSection":
        if self.delta_min >= self.fallback_threshold:
            raise ValueError("delta_min must be smaller than fallback_threshold")
        return self


class LossSection(_Section):
    lambda1: float = Field(3.0, ge=0)
    focal_alpha: float = Field(0.25, gt=0, lt=1)
    focal_gamma: float = Field(2.0, ge=0)
    pseudo_weight: float = Field(1.0, ge=0)
    cost_class: float = Field(2.0, ge=0)
    cost_bbox: float = Field(5.0, ge=0)
    cost_giou: float = Field(2.0, ge=0)
    bbox_l1_weight: float = Field(5.0, ge=0)
    bbox_giou_weight: float = Field(2.0, ge=0)


class EvalSection(_Section):
    max_detections: int = Field(100, ge=1)


class WorldSection(_Section):
    classes_per_task: Annotated[tuple[int, ...], BeforeValidator(_split_csv)] = (5, 5)
    feature_dim: int = Field(16, ge=2)
    class_radius: float = Field(3.0, gt=0)
    scale_spread: float = Field(0.5, ge=0)
    margin: float = Field(1.0, gt=0)
    noise: float = Field(0.25, ge=0)
    task_similarity: float = Field(0.5, ge=0, lt=1)
    queries_per_image: int = Field(10, ge=1)
    max_objects_per_image: int = Field(3, ge=1)
    images_per_stage: int = Field(160, ge=1)
    eval_images_per_task: int = Field(60, ge=1)
    cooccurrence_rate: float = Field(0.5, ge=0, le=1)
    image_size: int = Field(512, ge=128)
    image_feature_size: int = Field(4, ge=1)
    box_jitter: float = Field(0.05, ge=0, lt=0.5)
    seed: int = 17

    @field_validator("classes_per_task")
    @classmethod
    def _positive(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value or any(n < 1 for n in value):
            raise ValueError("classes_per_task needs at least one task with >= 1 class")
        return value

    @model_validator(mode="after")
    def _room_for_objects(self) -> "WorldSection":
        if self.max_objects_per_image > self.queries_per_image:
            raise ValueError("max_objects_per_image cannot exceed queries_per_image")
        return self


class TrainSection(_Section):
    learning_rate: float = Field(0.01, ge=0)
    momentum: float = Field(0.9, ge=0, lt=1)
    epochs: int = Field(20, ge=1)
    batch_size: int = Field(8, ge=1)
    use_adapter: bool = True
    max_grad_norm: float = Field(10.0, ge=0)
    crd_weight: float = Field(0.1, ge=0)
    modes: Annotated[tuple[str, ...], BeforeValidator(_split_csv)] = (
        "finetune",
        "crd",
        "cpg",
        "crd+cpg",
        "full",
    )

    @field_validator("modes")
    @classmethod
    def _known_modes(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        unknown = [m for m in value if m not in SIM_MODES]
        if unknown:
            raise ValueError(f"unknown modes {unknown}, expected any of {list(SIM_MODES)}")
        if not value:
            raise ValueError("at least one mode is required")
        return value


class IoSection(_Section):
    out_dir: str = "runs"
    workers: int = Field(0, ge=0)


class RunConfig(BaseModel):
    """
    Fully resolved configuration of one toolkit invocation.

    Sections:
        sip: Scale thresholds shared by partitioning and scale-stratified AP
        std: Topology distillation
        crd: Response distillation
        cpg: Pseudo-label generation
        loss: Matching costs and detection loss
        eval: COCO evaluation
        world: Synthetic world of the simulator
        train: Simulator optimisation and ablation modes
        io: Output directory and worker count

    Invariants:
        - std.weight == loss.lambda1 (both name the topology loss weight)
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    sip: SipSection = SipSection()
    std: StdSection = StdSection()
    crd: CrdSection = CrdSection()
    cpg: CpgSection = CpgSection()
    loss: LossSection = LossSection()
    eval: EvalSection = EvalSection()
    world: WorldSection = WorldSection()
    train: TrainSection = TrainSection()
    io: IoSection = IoSection()

    @model_validator(mode="after")
    def _lambda_agrees(self) -> "RunConfig":
        if self.std.weight != self.loss.lambda1:
            raise ValueError(
                f"std.weight ({self.std.weight}) and loss.lambda1 ({self.loss.lambda1}) "
                "must agree"
            )
        return self
