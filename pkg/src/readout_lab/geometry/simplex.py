"""Euclidean projection onto the probability simplex."""

import numpy as np

from readout_lab.errors import ParameterError


def simplex_project(v) -> np.ndarray:
    """
    Closest point of {w : w >= 0, sum(w) = 1} to v in Euclidean norm.

    Sort-based: find the largest rho with u_rho > (sum_{i<=rho} u_i - 1) / rho
    on the descending sort u, then threshold.
    """
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise ParameterError("Cannot project an empty vector onto the simplex")
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ranks = np.arange(1, v.size + 1)
    rho = np.nonzero(u - cumulative / ranks > 0)[0][-1]
    theta = cumulative[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)
