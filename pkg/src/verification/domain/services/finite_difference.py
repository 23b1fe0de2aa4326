from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-4


def central_difference(
    fn: Callable[[FloatArray], float], x: FloatArray, step: float = DEFAULT_STEP
) -> FloatArray:
    """
    Numerical gradient of a scalar function by central differences.

    Each entry is (f(x + h e_i) - f(x - h e_i)) / 2h; x is not modified.
    """
    point = np.array(x, dtype=np.float64)
    grad = np.zeros_like(point)
    flat_point = point.reshape(-1)
    flat_grad = grad.reshape(-1)
    for i in range(flat_point.size):
        original = flat_point[i]
        flat_point[i] = original + step
        upper = fn(point)
        flat_point[i] = original - step
        lower = fn(point)
        flat_point[i] = original
        flat_grad[i] = (upper - lower) / (2.0 * step)
    return grad


def relative_error(analytic: FloatArray, numeric: FloatArray, floor: float = 1e-8) -> float:
    """||a - n|| / max(||a|| + ||n||, floor); 0 when both gradients vanish."""
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    if a.shape != n.shape:
        raise ValueError(f"Gradient shapes differ: {a.shape} vs {n.shape}")
    scale = max(float(np.linalg.norm(a) + np.linalg.norm(n)), floor)
    return float(np.linalg.norm(a - n)) / scale
