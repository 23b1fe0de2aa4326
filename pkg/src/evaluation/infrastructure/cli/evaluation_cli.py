"""
Evaluation CLI adapter: `eval` subcommand.

Prints the per-class table and the aggregate metrics to stdout. With --out
the report is also written as JSON (plus effective_config.ini next to it);
with --pr-curves the IoU 0.50 precision/recall curves go to a CSV file.
"""

import argparse
from pathlib import Path

from injector import Injector

from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.infrastructure.cli.benchmark_cli import add_schedule_argument, load_schedule
from src.evaluation.application.commands.evaluate_detections import (
    EvaluateDetectionsCommand,
    EvaluateDetectionsHandler,
)
from src.evaluation.infrastructure.persistence.report_writers import (
    render_table,
    write_pr_curves,
    write_report_json,
)
from src.shared.infrastructure.config.ini_config_loader import dump_config
from src.shared.infrastructure.config.run_config import RunConfig
from src.simulation.application.commands.run_experiment import resolve_workers


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    common: argparse.ArgumentParser,
) -> None:
    parser = subparsers.add_parser(
        "eval", parents=[common], help="incremental COCO evaluation of a detection stream"
    )
    parser.add_argument("--detections", required=True, type=Path)
    parser.add_argument("--gt", required=True, type=Path, help="fully annotated test set")
    add_schedule_argument(parser)
    parser.add_argument("--stage", required=True, type=int, help="current 1-based stage")
    parser.add_argument("--out", type=Path, help="report JSON")
    parser.add_argument("--pr-curves", type=Path, help="PR curve CSV")
    parser.add_argument("--workers", type=int, help="threads, 0 = one per CPU")
    parser.set_defaults(handler=run_eval)


def run_eval(args: argparse.Namespace, injector: Injector) -> int:
    config = injector.get(RunConfig)
    schedules = injector.get(ScheduleRepository)  # type: ignore[type-abstract]
    workers = config.io.workers if args.workers is None else args.workers
    outcome = injector.get(EvaluateDetectionsHandler).handle(
        EvaluateDetectionsCommand(
            detections_path=args.detections,
            gt_path=args.gt,
            schedule=load_schedule(args.schedule, schedules),
            current_task=args.stage,
            workers=resolve_workers(max(workers, 0)),
        )
    )
    print(render_table(outcome.report, outcome.class_names), end="")
    if args.out is not None:
        write_report_json(outcome.report, args.out, outcome.class_names)
        dump_config(config, args.out.parent)
    if args.pr_curves is not None:
        write_pr_curves(outcome.report, args.pr_curves)
    return 0
