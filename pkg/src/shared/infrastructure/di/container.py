"""
Dependency injection container for shared infrastructure.

This module configures the injector Module for bindings shared by every
bounded context: the resolved run configuration and the file-backed
repositories for COCO datasets and detection streams.

Design Decisions:
    - Singleton scope: one RunConfig per CLI invocation
    - Interface binding: Domain repository ABC -> file adapter
    - Module separation: Shared infrastructure isolated from bounded contexts
    - Testability: Tests build Injector([InfrastructureModule(RunConfig()), ...])

Architecture:
    - InfrastructureModule: Binds RunConfig and shared repositories
    - Bounded Context Modules: Each context provides its own domain configs
      (ScaleConfig, CpgConfig, ...) from the RunConfig bound here
    - Composition: Injector([InfrastructureModule(config), DistillationModule(), ...])

Usage Example:
    ```python
    config = load_config(resolve_config_path(args.config))
    injector = Injector([
        InfrastructureModule(config),
        PseudoLabelModule(),
    ])
    handler = injector.get(GeneratePseudoLabelsHandler)
    ```
"""

from injector import Binder, Module, provider, singleton

from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository
from src.shared.domain.repositories.detection_stream_repository import (
    DetectionStreamRepository,
)
from src.shared.domain.value_objects.scale import ScaleConfig
from src.shared.infrastructure.config.run_config import RunConfig
from src.shared.infrastructure.persistence.json_coco_dataset_repository import (
    JsonCocoDatasetRepository,
)
from src.shared.infrastructure.persistence.text_detection_stream_repository import (
    TextDetectionStreamRepository,
)


class InfrastructureModule(Module):
    """
    Dependency injection module for shared infrastructure.

    Bindings:
        - RunConfig -> the instance given at construction (singleton)
        - ScaleConfig -> built from the [sip] section (singleton)
        - CocoDatasetRepository -> JsonCocoDatasetRepository (singleton)
        - DetectionStreamRepository -> TextDetectionStreamRepository (singleton)

    Singleton Justification:
        - Adapters are stateless; the config is immutable
    """

    def __init__(self, config: RunConfig | None = None) -> None:
        self._config = config if config is not None else RunConfig()

    def configure(self, binder: Binder) -> None:
        binder.bind(RunConfig, to=self._config, scope=singleton)

        binder.bind(
            CocoDatasetRepository,  # type: ignore[type-abstract]
            to=JsonCocoDatasetRepository,
            scope=singleton,
        )
        binder.bind(
            DetectionStreamRepository,  # type: ignore[type-abstract]
            to=TextDetectionStreamRepository,
            scope=singleton,
        )

    @singleton
    @provider
    def provide_scale_config(self, config: RunConfig) -> ScaleConfig:
        """
        Provide the scale thresholds shared by partitioning and evaluation.

        One instance serves both, which keeps SIP buckets and the evaluator's
        small/medium/large area ranges identical.
        """
        return ScaleConfig(tau_s=config.sip.tau_s, tau_m=config.sip.tau_m)
