"""Support-set temperature scaling by golden-section search."""

import math

import numpy as np
from scipy.special import log_softmax, softmax

from readout_lab.errors import OptimizationError, ParameterError
from readout_lab.calibration.types import TemperatureFit
from readout_lab.numcore import as_matrix
from readout_lab.utils import get_logger

logger = get_logger(__name__)

T_MIN = 1e-2
T_MAX = 1e2
BRACKET_TOL = 1e-4
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def mean_nll(logits: np.ndarray, labels: np.ndarray, temperature: float) -> float:
    log_probs = log_softmax(logits / temperature, axis=1)
    return float(-np.mean(log_probs[np.arange(labels.size), labels]))


def apply_temperature(logits, temperature: float) -> np.ndarray:
    """softmax(logits / T); argmax is unchanged for any T > 0."""
    if not temperature > 0.0:
        raise ParameterError(f"Temperature must be positive, got {temperature}")
    return softmax(as_matrix(logits, "logits") / temperature, axis=1)


def temperature_fit(
    logits,
    labels,
    lower: float = T_MIN,
    upper: float = T_MAX,
    tol: float = BRACKET_TOL,
) -> TemperatureFit:
    """
    Find T in [lower, upper] minimizing the mean NLL of softmax(logits / T).

    The search runs on log T until the bracket is narrower than tol. Rows that
    are all constant make every T optimal; the lower bound is returned and the
    fit is marked degenerate.
    """
    logits = as_matrix(logits, "logits")
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if logits.shape[0] < 2:
        raise ParameterError(f"Temperature fit needs at least 2 samples, got n={logits.shape[0]}")
    if labels.size != logits.shape[0]:
        raise ParameterError(f"Got {labels.size} labels for {logits.shape[0]} rows")
    if np.unique(labels).size < 2:
        raise ParameterError("Temperature fit needs at least two distinct labels")
    if labels.min() < 0 or labels.max() >= logits.shape[1]:
        raise ParameterError(f"Labels must lie in [0, {logits.shape[1]})")
    if not 0.0 < lower < upper:
        raise ParameterError(f"Invalid temperature bracket: [{lower}, {upper}]")

    if np.all(np.ptp(logits, axis=1) == 0.0):
        logger.debug("Constant logits: temperature fit is degenerate")
        return TemperatureFit(lower, mean_nll(logits, labels, lower), degenerate=True)

    def f(log_t: float) -> float:
        return mean_nll(logits, labels, math.exp(log_t))

    a, b = math.log(lower), math.log(upper)
    if not (math.isfinite(f(a)) or math.isfinite(f(b))):
        raise OptimizationError("NLL is non-finite at both temperature bounds")

    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)

    temperature = math.exp(0.5 * (a + b))
    return TemperatureFit(temperature, mean_nll(logits, labels, temperature), degenerate=False)
