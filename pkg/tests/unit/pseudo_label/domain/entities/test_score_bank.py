import pytest

from src.pseudo_label.domain.entities.score_bank import ScoreBank, bank_update
from src.pseudo_label.domain.exceptions import InvalidScoreBankError


def test_empty_bank_accepts_a_score() -> None:
    bank = bank_update(ScoreBank(class_id=1), [0.5])

    assert bank.scores.tolist() == [0.5]


def test_full_bank_evicts_oldest_first() -> None:
    bank = ScoreBank(class_id=1, capacity=3, scores=[0.5, 0.6, 0.7])

    updated = bank.updated([0.8])

    assert updated.scores.tolist() == [0.6, 0.7, 0.8]
    assert bank.scores.tolist() == [0.5, 0.6, 0.7]


def test_large_batch_keeps_only_the_newest_scores() -> None:
    bank = ScoreBank(class_id=1, capacity=2).updated([0.4, 0.5, 0.6, 0.7])

    assert bank.scores.tolist() == [0.6, 0.7]


def test_scores_at_or_below_delta_min_are_ignored() -> None:
    bank = ScoreBank(class_id=1, delta_min=0.3)

    updated = bank.updated([0.1, 0.3, 0.31])

    assert updated.scores.tolist() == [0.31]
    assert bank.updated([0.2]) is bank


def test_bank_scores_are_read_only() -> None:
    bank = ScoreBank(class_id=1, scores=[0.5])

    with pytest.raises(ValueError):
        bank.scores[0] = 0.9


@pytest.mark.parametrize(
    ("capacity", "scores"),
    [(0, []), (1, [0.5, 0.6]), (5, [0.2]), (5, [1.2])],
)
def test_invalid_bank_contents_are_rejected(capacity: int, scores: list[float]) -> None:
    with pytest.raises(InvalidScoreBankError):
        ScoreBank(class_id=1, capacity=capacity, scores=scores)
