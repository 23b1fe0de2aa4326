"""
Dependency injection module for the simulation bounded context.

Bindings:
    - ExperimentOutputRepository -> FileExperimentOutputRepository (singleton)
    - WorldConfig <- [world] section (singleton)
    - TrainConfig <- [train] section (singleton)

The handler also needs SetLossConfig, StdConfig, CrdConfig, CpgConfig and
EvaluationConfig, so the composition root installs those context modules too:
Injector([InfrastructureModule(config), DetectionLossModule(), DistillationModule(),
PseudoLabelModule(), EvaluationModule(), SimulationModule()])
"""

from injector import Binder, Module, provider, singleton

from src.shared.infrastructure.config.run_config import RunConfig
from src.simulation.domain.repositories.experiment_output_repository import (
    ExperimentOutputRepository,
)
from src.simulation.domain.value_objects.train_config import TrainConfig
from src.simulation.domain.value_objects.world_config import WorldConfig
from src.simulation.infrastructure.persistence.file_experiment_output_repository import (
    FileExperimentOutputRepository,
)


class SimulationModule(Module):
    def configure(self, binder: Binder) -> None:
        binder.bind(
            ExperimentOutputRepository,  # type: ignore[type-abstract]
            to=FileExperimentOutputRepository,
            scope=singleton,
        )

    @singleton
    @provider
    def provide_world_config(self, config: RunConfig) -> WorldConfig:
        world = config.world
        return WorldConfig(
            classes_per_task=tuple(world.classes_per_task),
            feature_dim=world.feature_dim,
            class_radius=world.class_radius,
            scale_spread=world.scale_spread,
            margin=world.margin,
            noise=world.noise,
            task_similarity=world.task_similarity,
            queries_per_image=world.queries_per_image,
            max_objects_per_image=world.max_objects_per_image,
            images_per_stage=world.images_per_stage,
            eval_images_per_task=world.eval_images_per_task,
            cooccurrence_rate=world.cooccurrence_rate,
            image_size=world.image_size,
            image_feature_size=world.image_feature_size,
            box_jitter=world.box_jitter,
            seed=world.seed,
        )

    @singleton
    @provider
    def provide_train_config(self, config: RunConfig) -> TrainConfig:
        train = config.train
        return TrainConfig(
            learning_rate=train.learning_rate,
            momentum=train.momentum,
            epochs=train.epochs,
            batch_size=train.batch_size,
            use_adapter=train.use_adapter,
            max_grad_norm=train.max_grad_norm,
            crd_weight=train.crd_weight,
        )
