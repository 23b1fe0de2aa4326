import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Self

from src.pseudo_label.domain.entities.score_bank import ScoreBank
from src.pseudo_label.domain.exceptions import MissingThresholdError
from src.pseudo_label.domain.services.two_means import kmeans2_threshold
from src.pseudo_label.domain.value_objects.cpg_config import CpgConfig, ThresholdStrategy

logger = logging.getLogger(__name__)


class Provenance(StrEnum):
    CLUSTERED = "clustered"
    FALLBACK = "fallback"
    FIXED = "fixed"


@dataclass(frozen=True)
class ClassThreshold:
    """
    Threshold of one old class and how it was obtained.

    Attributes:
        class_id: Old class
        tau: Minimum teacher score for a pseudo-label of this class
        provenance: clustered, fallback (bank too small or degenerate) or fixed
        bank_size: Number of scores in the bank when the threshold was computed
        mu_low: Low cluster mean (clustered only)
        mu_high: High cluster mean (clustered only)
    """

    class_id: int
    tau: float
    provenance: Provenance
    bank_size: int = 0
    mu_low: float | None = None
    mu_high: float | None = None


@dataclass(frozen=True)
class ThresholdTable:
    """
    Per-class pseudo-label thresholds for every old class.

    Attributes:
        entries: class_id -> ClassThreshold
    """

    entries: Mapping[int, ClassThreshold] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        banks: Mapping[int, ScoreBank],
        old_classes: Iterable[int],
        cfg: CpgConfig,
        warn: bool = True,
    ) -> Self:
        """
        Compute thresholds for the old classes from their score banks.

        Classes without a bank, with fewer than cfg.min_samples scores or with
        a single distinct score fall back to cfg.fallback_threshold, logged at
        WARNING unless warn is False. With the fixed strategy every class uses
        cfg.fallback_threshold.
        """
        entries: dict[int, ClassThreshold] = {}
        for class_id in sorted(set(old_classes)):
            bank = banks.get(class_id)
            size = len(bank) if bank is not None else 0

            if cfg.strategy is ThresholdStrategy.FIXED:
                entries[class_id] = ClassThreshold(
                    class_id, cfg.fallback_threshold, Provenance.FIXED, size
                )
                continue

            split = kmeans2_threshold(bank, cfg.min_samples) if bank is not None else None
            if split is None:
                logger.log(
                    logging.WARNING if warn else logging.DEBUG,
                    "Class %d: bank of %d scores cannot be clustered, using fallback %.3f",
                    class_id,
                    size,
                    cfg.fallback_threshold,
                )
                entries[class_id] = ClassThreshold(
                    class_id, cfg.fallback_threshold, Provenance.FALLBACK, size
                )
                continue

            entries[class_id] = ClassThreshold(
                class_id=class_id,
                tau=split.threshold,
                provenance=Provenance.CLUSTERED,
                bank_size=size,
                mu_low=split.mu_low,
                mu_high=split.mu_high,
            )
        return cls(entries=entries)

    def __contains__(self, class_id: object) -> bool:
        return class_id in self.entries

    def __iter__(self) -> Iterator[ClassThreshold]:
        return iter(self.entries[c] for c in sorted(self.entries))

    def tau(self, class_id: int) -> float:
        try:
            return self.entries[class_id].tau
        except KeyError as e:
            raise MissingThresholdError(class_id) from e

    @property
    def old_classes(self) -> frozenset[int]:
        return frozenset(self.entries)
