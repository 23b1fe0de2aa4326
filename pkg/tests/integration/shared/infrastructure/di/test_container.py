"""
Integration tests for the injector wiring.

Test Strategy:
    - Build the composition root from src.main with non-default settings
    - Every handler resolves, and every domain config reflects its section
"""

import pytest
from injector import Injector

from src.benchmark.application.commands.compute_split_stats import ComputeSplitStatsHandler
from src.benchmark.application.commands.split_dataset import SplitDatasetHandler
from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.infrastructure.persistence.text_schedule_repository import (
    TextScheduleRepository,
)
from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.evaluation.application.commands.evaluate_detections import EvaluateDetectionsHandler
from src.evaluation.domain.value_objects.evaluation_config import EvaluationConfig
from src.main import build_injector
from src.pseudo_label.application.commands.generate_pseudo_labels import (
    GeneratePseudoLabelsHandler,
)
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig, ThresholdStrategy
from src.shared.domain.value_objects.scale import ScaleConfig
from src.shared.infrastructure.config.ini_config_loader import parse_config
from src.simulation.application.commands.run_experiment import RunExperimentHandler
from src.simulation.domain.value_objects.train_config import TrainConfig
from src.simulation.domain.value_objects.world_config import WorldConfig
from src.verification.application.commands.run_gradcheck import RunGradcheckHandler

CUSTOM = """
[sip]
tau_s = 400
tau_m = 4000
[std]
temperature = 0.5
weight = 2
[loss]
lambda1 = 2
[crd]
tau_squared = true
[cpg]
strategy = fixed
[eval]
max_detections = 10
[world]
classes_per_task = 3, 2, 1
[train]
epochs = 4
"""


@pytest.fixture
def custom() -> Injector:
    return build_injector(parse_config(CUSTOM))


@pytest.mark.parametrize(
    "handler",
    [
        SplitDatasetHandler,
        ComputeSplitStatsHandler,
        GeneratePseudoLabelsHandler,
        EvaluateDetectionsHandler,
        RunExperimentHandler,
        RunGradcheckHandler,
    ],
)
def test_every_handler_resolves(injector: Injector, handler: type) -> None:
    assert isinstance(injector.get(handler), handler)


def test_repositories_are_singletons(injector: Injector) -> None:
    first = injector.get(ScheduleRepository)  # type: ignore[type-abstract]

    assert isinstance(first, TextScheduleRepository)
    assert injector.get(ScheduleRepository) is first  # type: ignore[type-abstract]


def test_domain_configs_come_from_their_sections(custom: Injector) -> None:
    assert custom.get(ScaleConfig) == ScaleConfig(tau_s=400, tau_m=4000)
    assert custom.get(StdConfig).temperature == 0.5
    assert custom.get(StdConfig).weight == 2.0
    assert custom.get(SetLossConfig).lambda1 == 2.0
    assert custom.get(CrdConfig).tau_squared is True
    assert custom.get(CpgConfig).strategy is ThresholdStrategy.FIXED
    assert custom.get(EvaluationConfig).max_detections == 10
    assert custom.get(WorldConfig).classes_per_task == (3, 2, 1)
    assert custom.get(TrainConfig).epochs == 4
