"""
Schedule file adapter.

Plain UTF-8 text, one stage per line, class names separated by commas:

    # DIOR 5+5+5+5
    airplane, airport, bridge, service-area, toll-station
    baseball field, basketball court, golf field, chimney, dam

Blank lines and lines starting with '#' are ignored.
"""

import logging
from pathlib import Path

from src.benchmark.domain.exceptions import InvalidScheduleError
from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.domain.value_objects.named_schedule import NamedSchedule

logger = logging.getLogger(__name__)


def parse_schedule(text: str, name: str) -> NamedSchedule:
    stages: list[tuple[str, ...]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        names = tuple(part.strip() for part in line.split(","))
        if any(not n for n in names):
            raise InvalidScheduleError(f"{name}:{line_number}: empty class name")
        stages.append(names)
    if not stages:
        raise InvalidScheduleError(f"{name}: schedule has no stages")
    return NamedSchedule(name=name, stages=tuple(stages))


class TextScheduleRepository(ScheduleRepository):
    def load(self, path: Path) -> NamedSchedule:
        schedule = parse_schedule(path.read_text(encoding="utf-8"), path.stem)
        logger.debug("Loaded schedule %s (%s)", schedule.name, schedule.label)
        return schedule

    def save(self, schedule: NamedSchedule, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"# {schedule.name}"] + [", ".join(stage) for stage in schedule.stages]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
