import pytest

from src.benchmark.domain.exceptions import InvalidScheduleError, UnknownStageError
from src.benchmark.domain.value_objects.split_stats import SplitStats
from src.benchmark.domain.value_objects.task_schedule import TaskSchedule
from src.shared.domain.exceptions import UnknownCategoryError


@pytest.fixture
def schedule() -> TaskSchedule:
    return TaskSchedule.of([1, 2], [3], [4, 5], name="2+1+2")


def test_stage_class_sets(schedule: TaskSchedule) -> None:
    assert schedule.num_stages == 3
    assert schedule.classes(2) == {3}
    assert schedule.old_classes(1) == frozenset()
    assert schedule.old_classes(3) == {1, 2, 3}
    assert schedule.seen_classes(2) == {1, 2, 3}
    assert schedule.all_classes == {1, 2, 3, 4, 5}


def test_stage_of_finds_the_introducing_stage(schedule: TaskSchedule) -> None:
    assert schedule.stage_of(4) == 3
    assert schedule.stage_of(9) is None


@pytest.mark.parametrize("stage", [0, 4])
def test_stages_are_one_based(schedule: TaskSchedule, stage: int) -> None:
    with pytest.raises(UnknownStageError) as exc_info:
        schedule.classes(stage)

    assert exc_info.value.num_stages == 3


def test_overlapping_stages_are_rejected() -> None:
    with pytest.raises(InvalidScheduleError, match="repeats"):
        TaskSchedule.of([1, 2], [2, 3])


@pytest.mark.parametrize("stages", [(), (frozenset({1}), frozenset())])
def test_empty_schedule_or_stage_is_rejected(stages: tuple[frozenset[int], ...]) -> None:
    with pytest.raises(InvalidScheduleError):
        TaskSchedule(stages=stages)


def test_validate_against_reports_unknown_classes(schedule: TaskSchedule) -> None:
    schedule.validate_against([1, 2, 3, 4, 5, 6])

    with pytest.raises(UnknownCategoryError):
        schedule.validate_against([1, 2, 3])


def test_split_stats_percentages() -> None:
    stats = SplitStats(stage=2, only_old=2, only_new=3, cooccurrence=1)

    assert stats.training_images == 4
    assert stats.cooccurrence_percent == 25.0
    assert stats.only_new_percent == 75.0
    assert stats.percent_of_all() == (pytest.approx(100 / 3), 50.0, pytest.approx(100 / 6))


def test_split_stats_without_training_images() -> None:
    assert SplitStats(stage=1, only_old=0, only_new=0, cooccurrence=0).cooccurrence_percent == 0.0
