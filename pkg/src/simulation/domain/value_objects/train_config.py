from dataclasses import dataclass
from enum import StrEnum

from src.simulation.domain.exceptions import InvalidTrainConfigError


class TrainingMode(StrEnum):
    """Loss components switched on for incremental stages."""

    FINETUNE = "finetune"
    CRD = "crd"
    CPG = "cpg"
    CRD_CPG = "crd+cpg"
    FULL = "full"
    STD = "std"

    @classmethod
    def parse(cls, value: str) -> "TrainingMode":
        try:
            return cls(value.strip().lower())
        except ValueError as e:
            known = ", ".join(m.value for m in cls)
            raise InvalidTrainConfigError(f"Unknown mode {value!r}, expected one of {known}") from e

    @property
    def uses_crd(self) -> bool:
        return self in (TrainingMode.CRD, TrainingMode.CRD_CPG, TrainingMode.FULL)

    @property
    def uses_cpg(self) -> bool:
        return self in (TrainingMode.CPG, TrainingMode.CRD_CPG, TrainingMode.FULL)

    @property
    def uses_std(self) -> bool:
        return self in (TrainingMode.FULL, TrainingMode.STD)

    @property
    def needs_teacher(self) -> bool:
        return self is not TrainingMode.FINETUNE


@dataclass(frozen=True)
class TrainConfig:
    """
    Optimiser settings of the simulated head.

    Attributes:
        learning_rate: Step size (0 freezes the parameters)
        momentum: Heavy-ball momentum coefficient
        epochs: Passes over a stage's training images
        batch_size: Images per optimiser step
        use_adapter: Train the feature adapter feeding topology distillation
        max_grad_norm: Global gradient norm clip, 0 disables clipping
        crd_weight: Scale of the response distillation term in the simulated objective
    """

    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 20
    batch_size: int = 8
    use_adapter: bool = True
    max_grad_norm: float = 10.0
    crd_weight: float = 0.1

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise InvalidTrainConfigError("learning_rate must be >= 0")
        if not 0.0 <= self.momentum < 1.0:
            raise InvalidTrainConfigError("momentum must lie in [0, 1)")
        if self.epochs < 1 or self.batch_size < 1:
            raise InvalidTrainConfigError("epochs and batch_size must be >= 1")
        if self.max_grad_norm < 0:
            raise InvalidTrainConfigError("max_grad_norm must be >= 0")
        if self.crd_weight < 0:
            raise InvalidTrainConfigError("crd_weight must be >= 0")
