"""
Unit tests for the INI config loader.

Test Strategy:
    - Parse documents from strings (no files) except for load/dump helpers
    - Schema violations must name file:line and the dotted key
"""

from pathlib import Path

import pytest

from src.shared.domain.exceptions import ConfigError
from src.shared.infrastructure.config.ini_config_loader import (
    CONFIG_ENV_VAR,
    EFFECTIVE_CONFIG_NAME,
    config_to_ini,
    dump_config,
    load_config,
    parse_config,
    resolve_config_path,
)
from src.shared.infrastructure.config.run_config import RunConfig


def test_empty_document_gives_defaults() -> None:
    assert parse_config("") == RunConfig()


def test_values_are_coerced_from_strings() -> None:
    config = parse_config(
        "[world]\nclasses_per_task = 4, 3, 3\nseed = 5\n"
        "[train]\nmodes = finetune, full\nuse_adapter = false\n"
        "[cpg]\nstrategy = fixed  # inline comment\n"
    )

    assert config.world.classes_per_task == (4, 3, 3)
    assert config.world.seed == 5
    assert config.train.modes == ("finetune", "full")
    assert config.train.use_adapter is False
    assert config.cpg.strategy == "fixed"


def test_unknown_key_names_file_line_and_key() -> None:
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[sip]\ntau_s = 100\ntau_x = 3\n", source="run.ini")

    assert excinfo.value.location == "run.ini:3"
    assert excinfo.value.key == "sip.tau_x"
    assert "unknown key" in str(excinfo.value)


def test_unknown_section_is_reported() -> None:
    with pytest.raises(ConfigError, match="unknown section") as excinfo:
        parse_config("[bogus]\nx = 1\n", source="run.ini")

    assert excinfo.value.location == "run.ini:1"


def test_range_violation_names_the_key() -> None:
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[eval]\n\nmax_detections = 0\n")

    assert excinfo.value.location == "<config>:3"
    assert excinfo.value.key == "eval.max_detections"


def test_unknown_mode_is_rejected() -> None:
    with pytest.raises(ConfigError, match="unknown modes"):
        parse_config("[train]\nmodes = finetune, magic\n")


def test_topology_weight_must_agree_with_lambda1() -> None:
    with pytest.raises(ConfigError, match="must agree"):
        parse_config("[std]\nweight = 2.0\n")

    config = parse_config("[std]\nweight = 2.0\n[loss]\nlambda1 = 2.0\n")
    assert config.std.weight == 2.0


def test_key_outside_section_is_a_syntax_error() -> None:
    with pytest.raises(ConfigError, match="outside of any section"):
        parse_config("seed = 3\n")


def test_rendered_config_parses_back_to_the_same_config() -> None:
    config = parse_config("[world]\nclasses_per_task = 2, 2, 2\n[io]\nworkers = 3\n")

    assert parse_config(config_to_ini(config)) == config


def test_dump_config_writes_effective_config(tmp_path: Path) -> None:
    path = dump_config(RunConfig(), tmp_path / "out")

    assert path.name == EFFECTIVE_CONFIG_NAME
    assert "[sip]" in path.read_text(encoding="utf-8")


def test_load_config_without_path_gives_defaults() -> None:
    assert load_config(None) == RunConfig()


def test_load_config_reads_file(tmp_path: Path) -> None:
    path = tmp_path / "run.ini"
    path.write_text("[world]\nseed = 99\n", encoding="utf-8")

    assert load_config(path).world.seed == 99


def test_explicit_config_wins_over_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(CONFIG_ENV_VAR, "from_env.ini")

    assert resolve_config_path("explicit.ini") == Path("explicit.ini")
    assert resolve_config_path(None) == Path("from_env.ini")

    monkeypatch.delenv(CONFIG_ENV_VAR)
    assert resolve_config_path(None) is None


def test_reference_config_lists_the_defaults() -> None:
    reference = Path(__file__).parents[5] / "configs" / "reference.ini"

    assert load_config(reference) == RunConfig()
