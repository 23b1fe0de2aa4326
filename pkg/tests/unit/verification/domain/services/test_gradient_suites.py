import numpy as np
import pytest

from src.verification.domain.exceptions import InvalidCheckConfigError, UnknownSuiteError
from src.verification.domain.services.finite_difference import (
    DEFAULT_TOLERANCE,
    central_difference,
    relative_error,
)
from src.verification.domain.services.gradient_suites import SUITE_NAMES, GradientSuites


def test_central_difference_of_a_quadratic() -> None:
    x = np.array([1.0, -2.0, 0.5])

    grad = central_difference(lambda v: float(np.sum(v**2)), x)

    np.testing.assert_allclose(grad, 2 * x, rtol=1e-8)
    np.testing.assert_array_equal(x, [1.0, -2.0, 0.5])


def test_relative_error_is_scale_free() -> None:
    a = np.array([1.0, 2.0])

    assert relative_error(a, a) == 0.0
    assert relative_error(np.zeros(2), np.zeros(2)) == 0.0
    assert relative_error(1e6 * a, 1e6 * a * 1.01) == pytest.approx(relative_error(a, 1.01 * a))


def test_relative_error_rejects_mismatched_shapes() -> None:
    with pytest.raises(ValueError):
        relative_error(np.zeros(2), np.zeros(3))


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_every_suite_passes_on_a_hundred_seeds(name: str) -> None:
    result = GradientSuites().run(name, seeds=100)

    assert result.passed
    assert result.instances == 100
    assert result.max_error < DEFAULT_TOLERANCE
    assert 0 <= result.worst_seed < 100


def test_unknown_suite_is_rejected() -> None:
    with pytest.raises(UnknownSuiteError):
        GradientSuites().run("adam", seeds=1)


@pytest.mark.parametrize(("seeds", "tolerance"), [(0, 1e-4), (3, 0.0)])
def test_run_rejects_non_positive_settings(seeds: int, tolerance: float) -> None:
    with pytest.raises(InvalidCheckConfigError):
        GradientSuites().run("std", seeds=seeds, tolerance=tolerance)


def test_step_must_be_positive() -> None:
    with pytest.raises(InvalidCheckConfigError):
        GradientSuites(step=0.0)
