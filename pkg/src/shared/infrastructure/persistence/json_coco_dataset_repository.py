import hashlib
import logging
from pathlib import Path

from pydantic import ValidationError

from src.shared.domain.entities.coco_dataset import CocoDataset
from src.shared.domain.exceptions import MalformedRecordError
from src.shared.domain.repositories.coco_dataset_repository import CocoDatasetRepository
from src.shared.infrastructure.persistence.coco_dtos import CocoFileDTO
from src.shared.infrastructure.persistence.coco_mapper import to_domain, to_persistence

logger = logging.getLogger(__name__)


class JsonCocoDatasetRepository(CocoDatasetRepository):
    """
    COCO repository backed by JSON files on the local filesystem.

    Files are validated with pydantic before mapping; a schema violation is
    reported as a MalformedRecordError on line 1 with pydantic's location
    path in the message.
    """

    def load(self, path: Path) -> CocoDataset:
        raw = path.read_bytes()
        try:
            dto = CocoFileDTO.model_validate_json(raw)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise MalformedRecordError(1, f"{path}: {location}: {first['msg']}") from e

        dataset = to_domain(dto, source_sha256=hashlib.sha256(raw).hexdigest())
        logger.debug(
            "Loaded %s: %d images, %d annotations, %d categories",
            path,
            len(dataset.images),
            len(dataset.annotations),
            len(dataset.categories),
        )
        return dataset

    def save(self, dataset: CocoDataset, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        dto = to_persistence(dataset)
        path.write_text(dto.model_dump_json(indent=2, exclude_none=True), encoding="utf-8")
        logger.debug("Wrote %s (%d annotations)", path, len(dataset.annotations))
