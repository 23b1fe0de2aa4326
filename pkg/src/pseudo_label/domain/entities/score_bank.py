from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Self

import numpy as np
from numpy.typing import NDArray

from src.pseudo_label.domain.exceptions import InvalidScoreBankError


@dataclass(frozen=True, eq=False)
class ScoreBank:
    """
    Bounded FIFO of teacher confidences for one old class.

    Every update returns a new bank; the oldest scores are evicted first once
    the capacity is reached. Scores at or below delta_min are ignored on
    update, so every stored score lies in (delta_min, 1].

    Attributes:
        class_id: Class the scores belong to
        capacity: Maximum number of stored scores
        delta_min: Candidate filter applied on update
        scores: Stored scores, oldest first (read-only)
    """

    class_id: int
    capacity: int = 20000
    delta_min: float = 0.3
    scores: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0, dtype=np.float64))

    def __post_init__(self) -> None:
        scores = np.array(self.scores, dtype=np.float64).reshape(-1)
        if self.capacity < 1:
            raise InvalidScoreBankError(f"Bank capacity must be >= 1, got {self.capacity}")
        if scores.size > self.capacity:
            raise InvalidScoreBankError(
                f"Bank for class {self.class_id} holds {scores.size} scores, "
                f"capacity is {self.capacity}"
            )
        if scores.size and (np.any(scores <= self.delta_min) or np.any(scores > 1.0)):
            raise InvalidScoreBankError(
                f"Bank for class {self.class_id} must hold scores in ({self.delta_min}, 1]"
            )
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    def __len__(self) -> int:
        return int(self.scores.size)

    def updated(self, batch_scores: Iterable[float]) -> Self:
        """
        Append a batch of scores, then truncate to capacity oldest-first.

        Scores <= delta_min are dropped before appending.
        """
        incoming = np.fromiter(batch_scores, dtype=np.float64)
        incoming = incoming[incoming > self.delta_min]
        if incoming.size == 0:
            return self
        merged = np.concatenate([self.scores, incoming])[-self.capacity :]
        return type(self)(
            class_id=self.class_id,
            capacity=self.capacity,
            delta_min=self.delta_min,
            scores=merged,
        )


def bank_update(bank: ScoreBank, batch_scores: Iterable[float]) -> ScoreBank:
    return bank.updated(batch_scores)
