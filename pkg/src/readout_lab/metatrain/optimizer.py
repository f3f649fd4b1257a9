"""AdamW with decoupled weight decay, cosine annealing and global-norm clipping."""

import math
from typing import Dict, Tuple

import numpy as np

from readout_lab.errors import ParameterError

Arrays = Dict[str, np.ndarray]


def cosine_lr(step: int, total_steps: int, base_lr: float, schedule: str = "cosine") -> float:
    """lr(t) = base * 0.5 * (1 + cos(pi * t / total)); constant schedule returns base."""
    if schedule == "constant" or total_steps <= 0:
        return base_lr
    if schedule != "cosine":
        raise ParameterError(f"Unknown schedule: {schedule}")
    return base_lr * 0.5 * (1.0 + math.cos(math.pi * min(step, total_steps) / total_steps))


def global_norm(grads: Arrays) -> float:
    return math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))


def clip_by_global_norm(grads: Arrays, max_norm: float) -> Tuple[Arrays, float]:
    """Rescale all gradients jointly so their global norm is at most max_norm."""
    norm = global_norm(grads)
    if norm <= max_norm or norm == 0.0:
        return grads, norm
    factor = max_norm / norm
    return {name: g * factor for name, g in grads.items()}, norm


class AdamW:
    """
    Adaptive moments with decoupled weight decay.

    theta <- theta - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta),
    so lr = 0 leaves parameters untouched.
    """

    def __init__(
        self,
        weight_decay: float = 1e-4,
        betas: Tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
    ):
        self.weight_decay = weight_decay
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self.m: Arrays = {}
        self.v: Arrays = {}

    def step(self, params: Arrays, grads: Arrays, lr: float) -> Arrays:
        self.t += 1
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        updated = {}
        for name, theta in params.items():
            g = grads.get(name)
            if g is None:
                g = np.zeros_like(theta)
            m = self.beta1 * self.m.get(name, np.zeros_like(theta)) + (1.0 - self.beta1) * g
            v = self.beta2 * self.v.get(name, np.zeros_like(theta)) + (1.0 - self.beta2) * g * g
            self.m[name], self.v[name] = m, v
            direction = (m / correction1) / (np.sqrt(v / correction2) + self.eps)
            updated[name] = theta - lr * (direction + self.weight_decay * theta)
        return updated
