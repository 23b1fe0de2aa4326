import argparse
import logging
import os
import sys
from collections.abc import Sequence

from dotenv import load_dotenv
from injector import Injector

from src.benchmark.infrastructure.cli import benchmark_cli
from src.benchmark.infrastructure.di.benchmark_module import BenchmarkModule
from src.detection_loss.infrastructure.di.detection_loss_module import DetectionLossModule
from src.distillation.infrastructure.di.distillation_module import DistillationModule
from src.evaluation.infrastructure.cli import evaluation_cli
from src.evaluation.infrastructure.di.evaluation_module import EvaluationModule
from src.pseudo_label.infrastructure.cli import pseudo_label_cli
from src.pseudo_label.infrastructure.di.pseudo_label_module import PseudoLabelModule
from src.shared.domain.exceptions import DomainError
from src.shared.infrastructure.config.ini_config_loader import load_config, resolve_config_path
from src.shared.infrastructure.config.run_config import RunConfig
from src.shared.infrastructure.di.container import InfrastructureModule
from src.simulation.infrastructure.cli import simulation_cli
from src.simulation.infrastructure.di.simulation_module import SimulationModule
from src.verification.infrastructure.cli import verification_cli

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file (default: $IOD_CONFIG, else built-in defaults)")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=LOG_LEVELS,
        help="default: $LOG_LEVEL, else INFO",
    )

    parser = argparse.ArgumentParser(
        prog="iod", description="Incremental object detection toolkit"
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for adapter in (
        benchmark_cli,
        pseudo_label_cli,
        evaluation_cli,
        simulation_cli,
        verification_cli,
    ):
        adapter.register(subparsers, common)
    return parser


def build_injector(config: RunConfig) -> Injector:
    return Injector(
        [
            InfrastructureModule(config),
            DistillationModule(),
            DetectionLossModule(),
            PseudoLabelModule(),
            BenchmarkModule(),
            EvaluationModule(),
            SimulationModule(),
        ]
    )


def configure_logging(explicit: str | None) -> None:
    # Valid levels: DEBUG, INFO, WARNING, ERROR, CRITICAL
    # Set via --log-level, or LOG_LEVEL in the environment / .env
    name = (explicit or os.getenv("LOG_LEVEL", "INFO")).upper()
    level = getattr(logging, name, logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s:%(name)s:%(message)s")
    logging.getLogger("src").setLevel(level)


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Parse, configure and run one subcommand; returns the exit status."""
    load_dotenv()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    configure_logging(args.log_level)
    try:
        config = load_config(resolve_config_path(args.config))
        status: int = args.handler(args, build_injector(config))
    except (DomainError, ValueError, OSError) as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    return status


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
