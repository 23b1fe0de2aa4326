"""
Verification CLI adapter: `gradcheck` subcommand.

Exit status is 0 when every requested suite passes, 1 otherwise.
"""

import argparse

from injector import Injector

from src.verification.application.commands.run_gradcheck import (
    RunGradcheckCommand,
    RunGradcheckHandler,
)
from src.verification.domain.services.finite_difference import DEFAULT_STEP, DEFAULT_TOLERANCE
from src.verification.domain.services.gradient_suites import SUITE_NAMES


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    common: argparse.ArgumentParser,
) -> None:
    parser = subparsers.add_parser(
        "gradcheck", parents=[common], help="finite-difference check of the analytic gradients"
    )
    parser.add_argument("--seeds", type=int, default=100, help="instances per suite")
    parser.add_argument(
        "--suite",
        action="append",
        choices=SUITE_NAMES,
        help="repeatable (default: all)",
    )
    parser.add_argument("--step", type=float, default=DEFAULT_STEP)
    parser.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    parser.set_defaults(handler=run_gradcheck)


def run_gradcheck(args: argparse.Namespace, injector: Injector) -> int:
    results = injector.get(RunGradcheckHandler).handle(
        RunGradcheckCommand(
            seeds=args.seeds,
            suites=tuple(args.suite) if args.suite else SUITE_NAMES,
            step=args.step,
            tolerance=args.tolerance,
        )
    )
    print(f"{'suite':<10}{'instances':>10}{'max_rel_error':>15}{'worst_seed':>12}  pass")
    for r in results:
        print(
            f"{r.name:<10}{r.instances:>10}{r.max_error:>15.3e}{r.worst_seed:>12}  "
            f"{'yes' if r.passed else 'no'}"
        )
    return 0 if all(r.passed for r in results) else 1
