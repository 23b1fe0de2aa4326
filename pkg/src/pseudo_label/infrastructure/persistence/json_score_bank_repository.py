import logging
from collections.abc import Mapping
from pathlib import Path

from pydantic import ValidationError

from src.pseudo_label.domain.entities.score_bank import ScoreBank
from src.pseudo_label.domain.repositories.score_bank_repository import ScoreBankRepository
from src.pseudo_label.infrastructure.persistence.score_bank_dtos import ScoreBankFileDTO
from src.pseudo_label.infrastructure.persistence.score_bank_mapper import (
    to_domain,
    to_persistence,
)
from src.shared.domain.exceptions import MalformedRecordError

logger = logging.getLogger(__name__)


class JsonScoreBankRepository(ScoreBankRepository):
    """Score bank state stored as a JSON sidecar file."""

    def load(self, path: Path) -> dict[int, ScoreBank]:
        if not path.exists():
            logger.info("No bank state at %s, starting with empty banks", path)
            return {}
        try:
            dto = ScoreBankFileDTO.model_validate_json(path.read_bytes())
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise MalformedRecordError(1, f"{path}: {location}: {first['msg']}") from e
        banks = to_domain(dto)
        logger.debug("Loaded %d score banks from %s", len(banks), path)
        return banks

    def save(self, banks: Mapping[int, ScoreBank], path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(to_persistence(banks).model_dump_json(indent=2), encoding="utf-8")
        logger.debug("Wrote %d score banks to %s", len(banks), path)
