import logging

import pytest

from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.verification.application.commands.run_gradcheck import (
    RunGradcheckCommand,
    RunGradcheckHandler,
)


@pytest.fixture
def handler() -> RunGradcheckHandler:
    return RunGradcheckHandler(StdConfig(), CrdConfig(), SetLossConfig())


def test_results_follow_request_order(handler: RunGradcheckHandler) -> None:
    results = handler.handle(RunGradcheckCommand(seeds=2, suites=("detr", "std")))

    assert [r.name for r in results] == ["detr", "std"]
    assert all(r.passed for r in results)


def test_failed_suites_are_logged(
    handler: RunGradcheckHandler, caplog: pytest.LogCaptureFixture
) -> None:
    with caplog.at_level(logging.WARNING):
        results = handler.handle(
            RunGradcheckCommand(seeds=2, suites=("crd_reg",), tolerance=1e-300)
        )

    assert not results[0].passed
    assert "Gradient suites failed: crd_reg" in caplog.text
