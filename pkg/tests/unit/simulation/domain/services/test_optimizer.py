import numpy as np
import pytest

from src.simulation.domain.entities.student_head import StudentHead
from src.simulation.domain.services.optimizer import MomentumSGD, global_norm


def _head() -> StudentHead:
    return StudentHead.initial(num_classes=2, feature_dim=2, seed=0)


def _grads(head: StudentHead, value: float) -> dict[str, np.ndarray]:
    return {name: np.full_like(p, value) for name, p in head.params.items()}


def test_global_norm() -> None:
    assert global_norm({"a": np.array([3.0]), "b": np.array([[4.0]])}) == 5.0


def test_zero_learning_rate_leaves_parameters_unchanged() -> None:
    head = _head()
    before = {name: p.copy() for name, p in head.params.items()}

    MomentumSGD(0.0, 0.9).step(head, _grads(head, 1.0))

    for name, p in head.params.items():
        np.testing.assert_array_equal(p, before[name])


def test_momentum_accumulates_velocity() -> None:
    head = _head()
    start = head.params["b"].copy()
    optimizer = MomentumSGD(0.1, 0.5)
    grads = _grads(head, 1.0)

    optimizer.step(head, grads)
    optimizer.step(head, grads)

    # v1 = 1, v2 = 0.5 + 1
    np.testing.assert_allclose(head.params["b"], start - 0.1 * (1.0 + 1.5))


def test_large_gradients_are_clipped_to_the_global_norm() -> None:
    head = _head()
    start = head.params["bb"].copy()
    grads = _grads(head, 1.0)
    norm = global_norm(grads)

    returned = MomentumSGD(1.0, 0.0, max_grad_norm=1.0).step(head, grads)

    assert returned == pytest.approx(norm)
    np.testing.assert_allclose(head.params["bb"], start - 1.0 / norm)


def test_frozen_head_cannot_be_updated() -> None:
    head = _head().frozen_copy()

    with pytest.raises(ValueError, match="frozen"):
        MomentumSGD(0.1, 0.9).step(head, _grads(head, 1.0))
