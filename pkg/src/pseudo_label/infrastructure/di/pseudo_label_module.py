"""
Dependency injection module for the pseudo-label bounded context.

Bindings:
    - ScoreBankRepository -> JsonScoreBankRepository (singleton)
    - CpgConfig <- [cpg] section of the RunConfig (singleton)

Composition: Injector([InfrastructureModule(config), PseudoLabelModule()])
"""

from injector import Binder, Module, provider, singleton

from src.pseudo_label.domain.repositories.score_bank_repository import ScoreBankRepository
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig, ThresholdStrategy
from src.pseudo_label.infrastructure.persistence.json_score_bank_repository import (
    JsonScoreBankRepository,
)
from src.shared.infrastructure.config.run_config import RunConfig


class PseudoLabelModule(Module):
    def configure(self, binder: Binder) -> None:
        binder.bind(
            ScoreBankRepository,  # type: ignore[type-abstract]
            to=JsonScoreBankRepository,
            scope=singleton,
        )

    @singleton
    @provider
    def provide_cpg_config(self, config: RunConfig) -> CpgConfig:
        cpg = config.cpg
        return CpgConfig(
            delta_min=cpg.delta_min,
            capacity=cpg.capacity,
            theta_nms=cpg.theta_nms,
            min_samples=cpg.min_samples,
            fallback_threshold=cpg.fallback_threshold,
            strategy=ThresholdStrategy(cpg.strategy),
        )
