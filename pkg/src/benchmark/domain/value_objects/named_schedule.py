"""
Schedules expressed with class names, and their resolution against a dataset.

Names are matched after normalisation (lowercase, spaces, dashes and
underscores removed). If no category matches exactly, a unique suffix match
is accepted, so "service-area" resolves to "Expressway-Service-area".
"""

import re
from collections.abc import Sequence
from dataclasses import dataclass

from src.benchmark.domain.exceptions import AmbiguousCategoryError, InvalidScheduleError
from src.benchmark.domain.value_objects.task_schedule import TaskSchedule
from src.shared.domain.entities.coco_dataset import Category
from src.shared.domain.exceptions import UnknownCategoryError

_SEPARATORS = re.compile(r"[\s\-_]+")


def normalize_name(name: str) -> str:
    return _SEPARATORS.sub("", name).lower()


def resolve_category(name: str, categories: Sequence[Category]) -> int:
    """
    Find the category id a class name refers to.

    Raises:
        UnknownCategoryError: If nothing matches
        AmbiguousCategoryError: If several categories match equally well
    """
    wanted = normalize_name(name)
    if not wanted:
        raise UnknownCategoryError(name, "empty class name")

    exact = [c for c in categories if normalize_name(c.name) == wanted]
    if len(exact) == 1:
        return exact[0].category_id
    if len(exact) > 1:
        raise AmbiguousCategoryError(name, [c.name for c in exact])

    suffix = [c for c in categories if normalize_name(c.name).endswith(wanted)]
    if len(suffix) == 1:
        return suffix[0].category_id
    if len(suffix) > 1:
        raise AmbiguousCategoryError(name, [c.name for c in suffix])
    raise UnknownCategoryError(name, "no category with this name")


@dataclass(frozen=True)
class NamedSchedule:
    """
    Task schedule written with class names.

    Attributes:
        name: Schedule label, e.g. "dior-5+5+5+5"
        stages: Class names per stage, in stage order
    """

    name: str
    stages: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if not self.stages or any(not stage for stage in self.stages):
            raise InvalidScheduleError(f"Schedule {self.name} has an empty stage")

    def resolve(self, categories: Sequence[Category]) -> TaskSchedule:
        """
        Map every class name to a category id.

        Raises:
            UnknownCategoryError: If a name matches no category
            InvalidScheduleError: If two names resolve to the same category
                in different stages, or a stage repeats a category
        """
        stages: list[frozenset[int]] = []
        for index, stage in enumerate(self.stages, start=1):
            ids = [resolve_category(name, categories) for name in stage]
            if len(set(ids)) != len(ids):
                raise InvalidScheduleError(
                    f"Stage {index} of {self.name} names the same category twice"
                )
            stages.append(frozenset(ids))
        return TaskSchedule(stages=tuple(stages), name=self.name)

    @property
    def label(self) -> str:
        return "+".join(str(len(stage)) for stage in self.stages)
