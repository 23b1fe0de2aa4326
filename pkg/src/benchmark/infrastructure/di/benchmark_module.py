from injector import Binder, Module, singleton

from src.benchmark.domain.repositories.schedule_repository import ScheduleRepository
from src.benchmark.infrastructure.persistence.text_schedule_repository import (
    TextScheduleRepository,
)


class BenchmarkModule(Module):
    """
    Bindings:
        - ScheduleRepository -> TextScheduleRepository (singleton)
    """

    def configure(self, binder: Binder) -> None:
        binder.bind(
            ScheduleRepository,  # type: ignore[type-abstract]
            to=TextScheduleRepository,
            scope=singleton,
        )
