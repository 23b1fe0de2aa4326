"""
Pseudo-label CLI adapter: `pseudo` subcommand.

Old classes come either from --old-classes (category ids) or from a
schedule and the current stage, resolved against the ground-truth file.

Outputs:
    --out                      augmented COCO file (pseudo-labels flagged is_pseudo)
    --banks                    updated bank state
    --report                   threshold report CSV (default: <out>.thresholds.csv)
    effective_config.ini       next to --out
"""

import argparse
import sys
from pathlib import Path

from injector import Injector

from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.infrastructure.cli.benchmark_cli import load_schedule
from src.pseudo_label.application.commands.generate_pseudo_labels import (
    GeneratePseudoLabelsCommand,
    GeneratePseudoLabelsHandler,
)
from src.pseudo_label.infrastructure.persistence.threshold_report_writer import (
    write_threshold_report,
)
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository
from src.shared.infrastructure.config.ini_config_loader import dump_config
from src.shared.infrastructure.config.run_config import RunConfig


def _class_ids(value: str) -> frozenset[int]:
    try:
        return frozenset(int(part) for part in value.split(",") if part.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated ids, got {value!r}") from e


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    common: argparse.ArgumentParser,
) -> None:
    parser = subparsers.add_parser(
        "pseudo", parents=[common], help="add teacher pseudo-labels for old classes"
    )
    parser.add_argument("--gt", required=True, type=Path, help="current-task COCO file")
    parser.add_argument(
        "--detections", required=True, type=Path, help="teacher detection stream"
    )
    parser.add_argument("--banks", required=True, type=Path, help="bank state file")
    parser.add_argument("--out", required=True, type=Path, help="augmented COCO file")
    parser.add_argument("--report", type=Path, help="threshold report CSV")
    old = parser.add_mutually_exclusive_group(required=True)
    old.add_argument("--old-classes", type=_class_ids, help="e.g. 1,2,3")
    old.add_argument("--schedule", help="preset or schedule file, used with --stage")
    parser.add_argument("--stage", type=int, help="current 1-based stage")
    parser.set_defaults(handler=run_pseudo)


def run_pseudo(args: argparse.Namespace, injector: Injector) -> int:
    if args.old_classes is not None:
        old_classes = args.old_classes
    else:
        if args.stage is None:
            print("error: --schedule needs --stage", file=sys.stderr)
            return 2
        schedules = injector.get(ScheduleRepository)  # type: ignore[type-abstract]
        datasets = injector.get(CocoDatasetRepository)  # type: ignore[type-abstract]
        categories = datasets.load(args.gt).categories
        schedule = load_schedule(args.schedule, schedules).resolve(categories)
        old_classes = schedule.old_classes(args.stage)

    summary = injector.get(GeneratePseudoLabelsHandler).handle(
        GeneratePseudoLabelsCommand(
            gt_path=args.gt,
            detections_path=args.detections,
            bank_path=args.banks,
            out_path=args.out,
            old_classes=frozenset(old_classes),
        )
    )
    report = args.report or args.out.with_suffix(".thresholds.csv")
    write_threshold_report(summary.thresholds, report)
    dump_config(injector.get(RunConfig), args.out.parent)
    print(
        f"{summary.num_kept} pseudo-labels kept of {summary.num_selected} selected "
        f"from {summary.num_detections} detections"
    )
    return 0
