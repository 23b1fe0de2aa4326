from abc import ABC, abstractmethod
from pathlib import Path

from src.benchmark.domain.value_objects.named_schedule import NamedSchedule


class ScheduleRepository(ABC):
    """Repository contract for schedule files (one stage per line, class names)."""

    @abstractmethod
    def load(self, path: Path) -> NamedSchedule:
        """
        Read a schedule file; the schedule is named after the file stem.

        Raises:
            InvalidScheduleError: If the file has no stage or an empty class name
            OSError: If the file cannot be read
        """
        pass

    @abstractmethod
    def save(self, schedule: NamedSchedule, path: Path) -> None:
        pass
