from abc import ABC, abstractmethod
from pathlib import Path

from src.simulation.domain.value_objects.experiment_result import ExperimentResult
from src.simulation.domain.value_objects.run_ledger import RunLedger


class ExperimentOutputRepository(ABC):
    """
    Repository interface for simulation outputs.

    Defines the contract for persisting ledgers, evaluation reports and the
    plot-data tables of an experiment.
    Infrastructure layer provides concrete implementations.
    """

    @abstractmethod
    def save(self, result: ExperimentResult, out_dir: Path) -> list[Path]:
        """
        Write every output of an experiment into a directory.

        Args:
            result: Ledgers and reports of all modes
            out_dir: Target directory, created if missing

        Returns:
            Paths written, in a stable order
        """
        pass

    @abstractmethod
    def load_ledger(self, path: Path) -> RunLedger:
        """
        Read a ledger written by save().

        Raises:
            MalformedRecordError: If the file is not a valid ledger
        """
        pass
