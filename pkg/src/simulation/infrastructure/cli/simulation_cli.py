"""
Simulation CLI adapter: `simulate` subcommand.

Runs the seeded synthetic experiment and prints the forgetting curve
(mode, stage, mAP_A, mAP_P, mAP_C in percent). Ledgers, reports and plot-data tables
land in --out-dir together with effective_config.ini.
"""

import argparse
from pathlib import Path

from injector import Injector

from src.shared.infrastructure.config.ini_config_loader import dump_config
from src.shared.infrastructure.config.run_config import SIM_MODES
from src.simulation.application.commands.run_experiment import (
    RunExperimentCommand,
    RunExperimentHandler,
)


def _cell(value: float | None) -> str:
    return "-" if value is None else f"{100.0 * value:.1f}"


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    common: argparse.ArgumentParser,
) -> None:
    parser = subparsers.add_parser(
        "simulate", parents=[common], help="run the synthetic incremental experiment"
    )
    parser.add_argument(
        "--mode",
        action="append",
        help=f"{', '.join(SIM_MODES)} (repeatable or comma-separated)",
    )
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out-dir", type=Path)
    parser.add_argument("--workers", type=int, help="threads, 0 = one per CPU")
    parser.set_defaults(handler=run_simulate)


def run_simulate(args: argparse.Namespace, injector: Injector) -> int:
    modes = None
    if args.mode:
        modes = tuple(m.strip() for value in args.mode for m in value.split(",") if m.strip())
    outcome = injector.get(RunExperimentHandler).handle(
        RunExperimentCommand(
            out_dir=args.out_dir, modes=modes, seed=args.seed, workers=args.workers
        )
    )
    dump_config(outcome.effective_config, outcome.out_dir)

    print(f"{'mode':<10}{'stage':>6}{'mAP_A':>8}{'mAP_P':>8}{'mAP_C':>8}")
    for mode, stage, a, p, c in outcome.result.forgetting_curve():
        print(f"{mode:<10}{stage:>6}{_cell(a):>8}{_cell(p):>8}{_cell(c):>8}")
    return 0
