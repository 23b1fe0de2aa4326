from collections.abc import Mapping

from src.pseudo_label.domain.entities.score_bank import ScoreBank
from src.pseudo_label.infrastructure.persistence.score_bank_dtos import (
    ScoreBankDTO,
    ScoreBankFileDTO,
)


def to_persistence(banks: Mapping[int, ScoreBank]) -> ScoreBankFileDTO:
    return ScoreBankFileDTO(
        banks=[
            ScoreBankDTO(
                class_id=bank.class_id,
                capacity=bank.capacity,
                delta_min=bank.delta_min,
                scores=[float(s) for s in bank.scores],
            )
            for _, bank in sorted(banks.items())
        ]
    )


def to_domain(dto: ScoreBankFileDTO) -> dict[int, ScoreBank]:
    return {
        entry.class_id: ScoreBank(
            class_id=entry.class_id,
            capacity=entry.capacity,
            delta_min=entry.delta_min,
            scores=entry.scores,
        )
        for entry in dto.banks
    }
