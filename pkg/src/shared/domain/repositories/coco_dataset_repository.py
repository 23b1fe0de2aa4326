from abc import ABC, abstractmethod
from pathlib import Path

from src.shared.domain.entities.coco_dataset import CocoDataset


class CocoDatasetRepository(ABC):
    """
    Repository contract for COCO-format annotation files.

    The domain sees CocoDataset entities only; the file format (JSON layout,
    extension fields, hashing) is the adapter's concern.
    """

    @abstractmethod
    def load(self, path: Path) -> CocoDataset:
        """
        Read a COCO annotation file.

        Args:
            path: Location of the file

        Returns:
            CocoDataset with source_sha256 set to the file's digest

        Raises:
            CrowdAnnotationError: If an annotation has iscrowd=1
            InvalidBoxError: If an annotation box is degenerate
            UnknownCategoryError: If an annotation references an unknown category
            OSError: If the file cannot be read
        """
        pass

    @abstractmethod
    def save(self, dataset: CocoDataset, path: Path) -> None:
        """
        Write a dataset as a COCO annotation file.

        Pseudo-labels keep their is_pseudo flag and score as extension
        fields, so load(save(d)) reproduces d.
        """
        pass
