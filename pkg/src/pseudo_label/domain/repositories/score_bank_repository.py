from abc import ABC, abstractmethod
from collections.abc import Mapping
from pathlib import Path

from src.pseudo_label.domain.entities.score_bank import ScoreBank


class ScoreBankRepository(ABC):
    """
    Repository contract for score bank state kept between runs.

    Banks persist as one sidecar file so thresholds stay stable when the
    pseudo command is run batch after batch.
    """

    @abstractmethod
    def load(self, path: Path) -> dict[int, ScoreBank]:
        """
        Read all banks from a state file.

        Args:
            path: Bank state file

        Returns:
            class_id -> ScoreBank; an empty dict when the file does not exist

        Raises:
            MalformedRecordError: If the file content is not a bank state
            InvalidScoreBankError: If a stored bank breaks its bounds
        """
        pass

    @abstractmethod
    def save(self, banks: Mapping[int, ScoreBank], path: Path) -> None:
        """Write all banks, replacing any previous state at path."""
        pass
