"""
Benchmark CLI adapter: `split` and `stats` subcommands.

Adapters are thin: arguments -> Command -> Handler -> files/stdout.
Domain errors propagate to src.main.dispatch, which maps them to exit 1.

Schedules are given either as a preset name (see `--schedule` help) or as
a path to a schedule file.
"""

import argparse
from pathlib import Path

from injector import Injector

from src.benchmark.application.commands.compute_split_stats import (
    ComputeSplitStatsCommand,
    ComputeSplitStatsHandler,
)
from src.benchmark.application.commands.split_dataset import (
    SplitDatasetCommand,
    SplitDatasetHandler,
)
from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.domain.services.schedule_presets import schedule_presets
from src.benchmark.domain.value_objects.named_schedule import NamedSchedule
from src.shared.infrastructure.config.ini_config_loader import dump_config
from src.shared.infrastructure.config.run_config import RunConfig


def load_schedule(value: str, schedules: ScheduleRepository) -> NamedSchedule:
    """Preset name if it is one, otherwise a schedule file path."""
    presets = schedule_presets()
    if value in presets:
        return presets[value]
    return schedules.load(Path(value))


def parse_stages(value: str) -> tuple[int, ...]:
    try:
        stages = tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated stages, got {value!r}") from e
    if not stages or any(s < 1 for s in stages):
        raise argparse.ArgumentTypeError(f"stages are 1-based, got {value!r}")
    return stages


def add_schedule_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--schedule",
        required=True,
        help=f"preset ({', '.join(sorted(schedule_presets()))}) or schedule file",
    )


def register(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    common: argparse.ArgumentParser,
) -> None:
    split = subparsers.add_parser(
        "split", parents=[common], help="write one COCO file per incremental stage"
    )
    split.add_argument("--gt", required=True, type=Path, help="fully annotated COCO file")
    add_schedule_argument(split)
    split.add_argument("--out-dir", required=True, type=Path)
    split.add_argument("--stages", type=parse_stages, help="e.g. 1,2 (default: all)")
    split.set_defaults(handler=run_split)

    stats = subparsers.add_parser(
        "stats", parents=[common], help="Only-Old / Only-New / Co-occurrence counts per stage"
    )
    stats.add_argument("--gt", required=True, type=Path)
    add_schedule_argument(stats)
    stats.add_argument("--stages", type=parse_stages)
    stats.set_defaults(handler=run_stats)


def run_split(args: argparse.Namespace, injector: Injector) -> int:
    schedules = injector.get(ScheduleRepository)  # type: ignore[type-abstract]
    schedule = load_schedule(args.schedule, schedules)
    written = injector.get(SplitDatasetHandler).handle(
        SplitDatasetCommand(
            gt_path=args.gt, schedule=schedule, out_dir=args.out_dir, stages=args.stages
        )
    )
    dump_config(injector.get(RunConfig), args.out_dir)
    for path in written:
        print(path)
    return 0


def run_stats(args: argparse.Namespace, injector: Injector) -> int:
    schedules = injector.get(ScheduleRepository)  # type: ignore[type-abstract]
    schedule = load_schedule(args.schedule, schedules)
    stats = injector.get(ComputeSplitStatsHandler).handle(
        ComputeSplitStatsCommand(gt_path=args.gt, schedule=schedule, stages=args.stages)
    )
    print("stage  only_old  only_new  cooccurrence  cooccurrence_%")
    for s in stats:
        print(
            f"{s.stage:>5}  {s.only_old:>8}  {s.only_new:>8}  {s.cooccurrence:>12}  "
            f"{s.cooccurrence_percent:>14.1f}"
        )
    return 0
