import math
from collections.abc import Mapping

import numpy as np
from numpy.typing import NDArray

from src.simulation.domain.entities.student_head import StudentHead

FloatArray = NDArray[np.float64]


def global_norm(grads: Mapping[str, FloatArray]) -> float:
    return math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))


class MomentumSGD:
    """
    Heavy-ball SGD with global-norm clipping.

        v <- momentum * v + g
        theta <- theta - learning_rate * v

    Gradients whose global norm exceeds max_grad_norm are rescaled to it
    first; max_grad_norm == 0 disables clipping.
    """

    def __init__(self, learning_rate: float, momentum: float, max_grad_norm: float = 0.0) -> None:
        self._learning_rate = learning_rate
        self._momentum = momentum
        self._max_grad_norm = max_grad_norm
        self._velocity: dict[str, FloatArray] = {}

    def step(self, head: StudentHead, grads: Mapping[str, FloatArray]) -> float:
        """
        Update the head in place.

        Returns:
            Gradient norm before clipping
        """
        if head.frozen:
            raise ValueError("Cannot update a frozen head")
        norm = global_norm(grads)
        scale = 1.0
        if self._max_grad_norm > 0 and norm > self._max_grad_norm:
            scale = self._max_grad_norm / norm

        for name, grad in grads.items():
            velocity = self._velocity.get(name)
            if velocity is None:
                velocity = np.zeros_like(grad)
            velocity = self._momentum * velocity + scale * grad
            self._velocity[name] = velocity
            head.params[name] -= self._learning_rate * velocity
        return norm
