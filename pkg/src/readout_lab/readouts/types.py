"""Fitted readout heads."""

from typing import NamedTuple

import numpy as np


class PrototypeModel(NamedTuple):
    """Class-mean prototypes (C x d_z) and per-class support counts."""
    prototypes: np.ndarray
    class_counts: np.ndarray


class FittedRidge(NamedTuple):
    """Closed-form ridge head: weights W (d_z x C), bias b (C,), strength lambda."""
    W: np.ndarray
    b: np.ndarray
    ridge_lambda: float


class LogisticModel(NamedTuple):
    """L2-regularized multinomial logistic head."""
    W: np.ndarray
    b: np.ndarray
    ridge_lambda: float
    iterations_used: int
    converged: bool
