from pathlib import Path

import pytest

from src.benchmark.domain.exceptions import InvalidScheduleError
from src.benchmark.domain.services.schedule_presets import DIOR_5_5_5_5
from src.benchmark.infrastructure.persistence.text_schedule_repository import (
    TextScheduleRepository,
    parse_schedule,
)


def test_parse_skips_comments_and_blank_lines() -> None:
    schedule = parse_schedule("# base\nairplane, ship\n\n  dam ,chimney\n", "mine")

    assert schedule.name == "mine"
    assert schedule.stages == (("airplane", "ship"), ("dam", "chimney"))


@pytest.mark.parametrize("text", ["", "# only a comment\n", "ship,,dam\n"])
def test_parse_rejects_empty_schedules_and_names(text: str) -> None:
    with pytest.raises(InvalidScheduleError):
        parse_schedule(text, "bad")


def test_saved_schedule_loads_back_under_the_file_stem(tmp_path: Path) -> None:
    repository = TextScheduleRepository()
    path = tmp_path / "dior-5+5+5+5.schedule"

    repository.save(DIOR_5_5_5_5, path)

    assert repository.load(path) == DIOR_5_5_5_5
