from dataclasses import dataclass


def _percent(part: int, whole: int) -> float:
    return 100.0 * part / whole if whole else 0.0


@dataclass(frozen=True)
class SplitStats:
    """
    Image subsets of one stage.

    Only-Old images hold old classes but none of C_t; they are unused at the
    stage. Only-New images hold C_t classes only; Co-occurrence images hold
    both. The three subsets are disjoint and cover every image that contains
    a class scheduled up to this stage.

    Attributes:
        stage: 1-based stage
        only_old: Only-Old image count
        only_new: Only-New image count
        cooccurrence: Co-occurrence image count
    """

    stage: int
    only_old: int
    only_new: int
    cooccurrence: int

    @property
    def training_images(self) -> int:
        return self.only_new + self.cooccurrence

    @property
    def total_images(self) -> int:
        return self.only_old + self.only_new + self.cooccurrence

    @property
    def cooccurrence_percent(self) -> float:
        """Co-occurrence share of the stage's training images."""
        return _percent(self.cooccurrence, self.training_images)

    @property
    def only_new_percent(self) -> float:
        return _percent(self.only_new, self.training_images)

    def percent_of_all(self) -> tuple[float, float, float]:
        """(Only-Old, Only-New, Co-occurrence) shares over all three subsets."""
        total = self.total_images
        return (
            _percent(self.only_old, total),
            _percent(self.only_new, total),
            _percent(self.cooccurrence, total),
        )
