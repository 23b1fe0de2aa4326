"""
Dependency injection module for the distillation bounded context.

Builds the domain configs of topology and response distillation from the
resolved RunConfig, so domain services never see pydantic models.

Architecture:
    - InfrastructureModule: binds RunConfig and ScaleConfig
    - DistillationModule: StdConfig <- [std], CrdConfig <- [crd]
    - Composition: Injector([InfrastructureModule(config), DistillationModule()])
"""

from injector import Module, provider, singleton

from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.shared.infrastructure.config.run_config import RunConfig


class DistillationModule(Module):
    @singleton
    @provider
    def provide_std_config(self, config: RunConfig) -> StdConfig:
        return StdConfig(
            temperature=config.std.temperature,
            include_background_anchor=config.std.include_background_anchor,
            weight=config.std.weight,
        )

    @singleton
    @provider
    def provide_crd_config(self, config: RunConfig) -> CrdConfig:
        return CrdConfig(
            temperature=config.crd.temperature,
            bbox_l1_weight=config.crd.bbox_l1_weight,
            bbox_giou_weight=config.crd.bbox_giou_weight,
            tau_squared=config.crd.tau_squared,
        )
