from abc import ABC, abstractmethod
from collections.abc import Iterable
from pathlib import Path

from src.shared.domain.value_objects.detection import Detection


class DetectionStreamRepository(ABC):
    """
    Repository contract for detection streams.

    A stream holds one detection per record with the fixed field order
    image_id, x, y, w, h, score, class_id. Every returned Detection carries
    its image_id; query indices are assigned per image in file order.
    """

    @abstractmethod
    def load(self, path: Path) -> list[Detection]:
        """
        Read every detection of a stream file.

        Raises:
            MalformedRecordError: If a record cannot be parsed (names the line)
            OSError: If the file cannot be read
        """
        pass

    @abstractmethod
    def save(self, detections: Iterable[Detection], path: Path) -> None:
        """Write detections in stream order; image_id must be set on each."""
        pass
