import numpy as np
import pytest

from src.simulation.domain.entities.student_head import PARAMETER_NAMES, StudentHead
from src.verification.domain.services.finite_difference import central_difference, relative_error

N, D, C = 5, 4, 3


@pytest.fixture
def head() -> StudentHead:
    rng = np.random.default_rng(3)
    params = {
        "W": rng.normal(size=(C, D)),
        "b": rng.normal(size=C),
        "Wb": 0.1 * rng.normal(size=(4, D)),
        "bb": 0.1 * rng.normal(size=4),
        "A": np.eye(D) + 0.1 * rng.normal(size=(D, D)),
    }
    return StudentHead(params)


@pytest.fixture
def inputs() -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(4)
    features = rng.normal(size=(N, D))
    reference = np.column_stack(
        [rng.uniform(0.3, 0.7, size=(N, 2)), rng.uniform(0.1, 0.3, size=(N, 2))]
    )
    return features, reference


def test_initial_head_has_identity_adapter_and_prior_bias() -> None:
    head = StudentHead.initial(num_classes=3, feature_dim=4, seed=0)

    np.testing.assert_array_equal(head.params["A"], np.eye(4))
    assert head.params["b"] == pytest.approx(np.full(3, -np.log(99.0)))
    assert not head.params["Wb"].any()


def test_zero_box_offsets_reproduce_the_reference_boxes(
    inputs: tuple[np.ndarray, np.ndarray],
) -> None:
    head = StudentHead.initial(num_classes=3, feature_dim=D, seed=0)
    features, reference = inputs

    out = head.forward(features, reference)

    np.testing.assert_allclose(out.boxes, reference)
    assert out.logits.shape == (N, 3)


def test_frozen_copy_is_write_protected_and_independent(head: StudentHead) -> None:
    frozen = head.frozen_copy()
    head.params["W"][0, 0] += 1.0

    assert frozen.frozen
    assert frozen.params["W"][0, 0] != head.params["W"][0, 0]
    with pytest.raises(ValueError):
        frozen.params["W"][0, 0] = 0.0


def test_missing_parameters_are_rejected() -> None:
    with pytest.raises(ValueError, match="Missing"):
        StudentHead({"W": np.zeros((2, 2))})


@pytest.mark.parametrize("name", PARAMETER_NAMES)
def test_backward_matches_finite_differences(
    head: StudentHead, inputs: tuple[np.ndarray, np.ndarray], name: str
) -> None:
    features, reference = inputs
    rng = np.random.default_rng(5)
    g_logits = rng.normal(size=(N, C))
    g_boxes = rng.normal(size=(N, 4))
    g_features = rng.normal(size=(N, D))

    def loss(value: np.ndarray) -> float:
        params = dict(head.params)
        params[name] = value
        out = StudentHead(params).forward(features, reference)
        return float(
            np.sum(out.logits * g_logits)
            + np.sum(out.boxes * g_boxes)
            + np.sum(out.adapted * g_features)
        )

    out = head.forward(features, reference)
    grads = head.backward(features, reference, out, g_logits, g_boxes, g_features)

    numeric = central_difference(loss, head.params[name])
    assert relative_error(grads[name], numeric) < 1e-6


def test_adapter_gradient_is_zero_when_not_trained(
    head: StudentHead, inputs: tuple[np.ndarray, np.ndarray]
) -> None:
    features, reference = inputs
    out = head.forward(features, reference)

    grads = head.backward(
        features, reference, out, np.ones((N, C)), np.ones((N, 4)), train_adapter=False
    )

    assert not grads["A"].any()
    assert grads["W"].any()
