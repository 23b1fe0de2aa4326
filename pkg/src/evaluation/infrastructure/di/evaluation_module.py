from injector import Module, provider, singleton

from src.evaluation.domain.value_objects.evaluation_config import EvaluationConfig
from src.shared.infrastructure.config.run_config import RunConfig


class EvaluationModule(Module):
    """Provides EvaluationConfig from the [eval] section; ScaleConfig comes from shared."""

    @singleton
    @provider
    def provide_evaluation_config(self, config: RunConfig) -> EvaluationConfig:
        return EvaluationConfig(max_detections=config.eval.max_detections)
