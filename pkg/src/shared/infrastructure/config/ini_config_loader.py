"""
INI reader and writer for RunConfig.

A config file is a plain INI document, one `[section]` per RunConfig
section and `key = value` lines inside; `#` and `;` start comments. Missing
keys take their defaults. Schema violations are reported as ConfigError
naming `file:line` and the dotted key path.

The default file comes from the IOD_CONFIG environment variable (a `.env`
file is honoured, see main.py); an explicit --config always wins.
"""

import configparser
import logging
import os
import re
from pathlib import Path

from pydantic import ValidationError

from src.shared.domain.exceptions import ConfigError
from src.shared.infrastructure.config.run_config import RunConfig

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "IOD_CONFIG"
EFFECTIVE_CONFIG_NAME = "effective_config.ini"

_SECTION_LINE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_LINE = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")


def resolve_config_path(explicit: str | None) -> Path | None:
    """Pick --config if given, else $IOD_CONFIG, else None (all defaults)."""
    if explicit:
        return Path(explicit)
    from_env = os.getenv(CONFIG_ENV_VAR)
    return Path(from_env) if from_env else None


def _line_index(text: str) -> dict[tuple[str, str | None], int]:
    index: dict[tuple[str, str | None], int] = {}
    section: str | None = None
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION_LINE.match(line)
        if header:
            section = header.group(1).strip()
            index.setdefault((section, None), number)
            continue
        key = _KEY_LINE.match(line)
        if key and section is not None:
            index.setdefault((section, key.group(1).strip().lower()), number)
    return index


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """
    Parse an INI document into a RunConfig.

    Args:
        text: INI document
        source: Name used in error messages (usually the file path)

    Raises:
        ConfigError: On INI syntax errors, unknown sections or keys, type
            errors and range violations
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError(f"{source}:{e.lineno}", "<header>", "key outside of any section") from e
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"{source}:{e.lineno}", f"{e.section}.{e.option}", "duplicate key") from e
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"{source}:{e.lineno}", e.section, "duplicate section") from e
    except configparser.ParsingError as e:
        line_number = e.errors[0][0] if e.errors else 0
        raise ConfigError(f"{source}:{line_number}", "<syntax>", "unparseable line") from e

    raw = {section: dict(parser.items(section)) for section in parser.sections()}
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        raise _to_config_error(e, text, source) from e


def _to_config_error(error: ValidationError, text: str, source: str) -> ConfigError:
    first = error.errors()[0]
    loc = [str(part) for part in first["loc"]]
    index = _line_index(text)

    if not loc:
        return ConfigError(source, "<config>", first["msg"])

    section = loc[0]
    key = loc[1] if len(loc) > 1 else None
    line = index.get((section, key)) if key else None
    if line is None:
        line = index.get((section, None))

    location = f"{source}:{line}" if line is not None else source
    dotted = section if key is None else f"{section}.{key}"
    detail = "unknown key" if first["type"] == "extra_forbidden" else first["msg"]
    if first["type"] == "extra_forbidden" and key is None:
        detail = "unknown section"
    return ConfigError(location, dotted, detail)


def load_config(path: Path | None) -> RunConfig:
    """
    Load a config file, or the all-defaults config when path is None.

    Raises:
        ConfigError: If the file violates the schema
        OSError: If the file cannot be read
    """
    if path is None:
        logger.debug("No config file given, using defaults")
        return RunConfig()
    config = parse_config(path.read_text(encoding="utf-8"), source=str(path))
    logger.debug("Loaded config from %s", path)
    return config


def config_to_ini(config: RunConfig) -> str:
    """Render every key of a config, defaults included, as an INI document."""
    parser = configparser.ConfigParser(interpolation=None)
    for section, values in config.model_dump().items():
        parser[section] = {key: _format_value(value) for key, value in values.items()}

    lines: list[str] = []
    for section in parser.sections():
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {value}" for key, value in parser[section].items())
        lines.append("")
    return "\n".join(lines)


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple | list):
        return ", ".join(str(v) for v in value)
    return str(value)


def dump_config(config: RunConfig, directory: Path) -> Path:
    """Write effective_config.ini into `directory` and return its path."""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / EFFECTIVE_CONFIG_NAME
    path.write_text(config_to_ini(config), encoding="utf-8")
    return path
