from collections.abc import Iterable
from dataclasses import dataclass
from typing import Self

from src.benchmark.domain.exceptions import InvalidScheduleError, UnknownStageError
from src.shared.domain.exceptions import UnknownCategoryError


@dataclass(frozen=True)
class TaskSchedule:
    """
    Ordered class-id sets C_1 .. C_n of an incremental benchmark.

    Stages are 1-based everywhere in the toolkit: stage 1 is the base task.

    Attributes:
        stages: One frozenset of category ids per stage
        name: Label recorded in split provenance

    Invariants:
        - At least one stage, every stage non-empty
        - Stages pairwise disjoint
    """

    stages: tuple[frozenset[int], ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        stages = tuple(frozenset(stage) for stage in self.stages)
        if not stages:
            raise InvalidScheduleError("A schedule needs at least one stage")
        seen: set[int] = set()
        for index, stage in enumerate(stages, start=1):
            if not stage:
                raise InvalidScheduleError(f"Stage {index} has no classes")
            overlap = seen & stage
            if overlap:
                raise InvalidScheduleError(
                    f"Stage {index} repeats classes of earlier stages: {sorted(overlap)}"
                )
            seen |= stage
        object.__setattr__(self, "stages", stages)

    @classmethod
    def of(cls, *stages: Iterable[int], name: str = "custom") -> Self:
        return cls(stages=tuple(frozenset(s) for s in stages), name=name)

    @property
    def num_stages(self) -> int:
        return len(self.stages)

    @property
    def all_classes(self) -> frozenset[int]:
        return frozenset().union(*self.stages)

    def _check(self, stage: int) -> None:
        if not 1 <= stage <= self.num_stages:
            raise UnknownStageError(stage, self.num_stages)

    def classes(self, stage: int) -> frozenset[int]:
        """Classes introduced at the stage (C_t)."""
        self._check(stage)
        return self.stages[stage - 1]

    def old_classes(self, stage: int) -> frozenset[int]:
        """Classes of all earlier stages."""
        self._check(stage)
        return frozenset().union(*self.stages[: stage - 1])

    def seen_classes(self, stage: int) -> frozenset[int]:
        """Classes learned up to and including the stage."""
        self._check(stage)
        return frozenset().union(*self.stages[:stage])

    def stage_of(self, class_id: int) -> int | None:
        for index, stage in enumerate(self.stages, start=1):
            if class_id in stage:
                return index
        return None

    def validate_against(self, category_ids: Iterable[int]) -> None:
        """
        Raises:
            UnknownCategoryError: If a scheduled class is not a dataset category
        """
        known = set(category_ids)
        for class_id in sorted(self.all_classes):
            if class_id not in known:
                raise UnknownCategoryError(class_id, f"schedule {self.name}")
