"""
RunGradcheck command and handler.

Command Flow:
    1. Build the suites with the configured loss settings
    2. Run every requested suite on seeds 0..seeds-1
    3. Return one SuiteResult per suite, in request order
"""

import logging
from dataclasses import dataclass

from injector import inject

from src.detection_loss.domain.value_objects.set_loss_config import SetLossConfig
from src.distillation.domain.value_objects.distillation_config import CrdConfig, StdConfig
from src.verification.domain.services.finite_difference import DEFAULT_STEP, DEFAULT_TOLERANCE
from src.verification.domain.services.gradient_suites import SUITE_NAMES, GradientSuites
from src.verification.domain.value_objects.suite_result import SuiteResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunGradcheckCommand:
    seeds: int = 100
    suites: tuple[str, ...] = SUITE_NAMES
    step: float = DEFAULT_STEP
    tolerance: float = DEFAULT_TOLERANCE


class RunGradcheckHandler:
    @inject
    def __init__(self, std: StdConfig, crd: CrdConfig, loss: SetLossConfig) -> None:
        self._std = std
        self._crd = crd
        self._loss = loss

    def handle(self, command: RunGradcheckCommand) -> list[SuiteResult]:
        """
        Raises:
            UnknownSuiteError: If a suite name is not registered
            InvalidCheckConfigError: If seeds, step or tolerance are not positive
        """
        suites = GradientSuites(self._std, self._crd, self._loss, step=command.step)
        results = [suites.run(name, command.seeds, command.tolerance) for name in command.suites]
        failed = [r.name for r in results if not r.passed]
        if failed:
            logger.warning("Gradient suites failed: %s", ", ".join(failed))
        logger.info(
            "Checked %d gradient suite(s) on %d seeds each", len(results), command.seeds
        )
        return results
