from dataclasses import dataclass

from src.detection_loss.domain.exceptions import StaleMatchError


@dataclass(frozen=True)
class MatchResult:
    """
    One-to-one assignment of targets to queries.

    Attributes:
        assignment: Per query, the matched target index or None (no object)
        total_cost: Sum of the matching cost over matched pairs
        num_targets: Number of targets the match was computed for

    Invariants:
        - Every target index 0..num_targets-1 appears exactly once
    """

    assignment: tuple[int | None, ...]
    total_cost: float
    num_targets: int

    def __post_init__(self) -> None:
        matched = [t for t in self.assignment if t is not None]
        if sorted(matched) != list(range(self.num_targets)):
            raise StaleMatchError(
                f"Assignment {self.assignment} does not cover {self.num_targets} targets once"
            )

    @property
    def num_queries(self) -> int:
        return len(self.assignment)

    def pairs(self) -> list[tuple[int, int]]:
        """(query_index, target_index) pairs in ascending query order."""
        return [(q, t) for q, t in enumerate(self.assignment) if t is not None]

    def ensure_matches(self, num_queries: int, num_targets: int) -> None:
        """Raise StaleMatchError unless this match was computed for these shapes."""
        if self.num_queries != num_queries or self.num_targets != num_targets:
            raise StaleMatchError(
                f"Match was computed for {self.num_queries} queries / {self.num_targets} "
                f"targets, got {num_queries} / {num_targets}"
            )
