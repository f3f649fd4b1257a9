"""Distance from a class prototype to the convex hull of the remaining prototypes."""

from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from readout_lab.config import settings
from readout_lab.errors import ConvergenceError, ParameterError
from readout_lab.geometry.simplex import simplex_project
from readout_lab.geometry.types import HullSolution
from readout_lab.numcore import as_matrix
from readout_lab.utils import get_logger

logger = get_logger(__name__)

KKT_TOL = 1e-8
POLISH_EVERY = 50


def _kkt_residual(G: np.ndarray, w: np.ndarray) -> float:
    grad = G @ w
    return float(np.linalg.norm(w - simplex_project(w - grad)))


def _polish(G: np.ndarray, w: np.ndarray) -> Optional[np.ndarray]:
    # Equality-constrained least squares on the current support
    active = np.flatnonzero(w > 1e-12)
    m = active.size
    system = np.zeros((m + 1, m + 1))
    system[:m, :m] = G[np.ix_(active, active)]
    system[:m, m] = 1.0
    system[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    solution = np.linalg.lstsq(system, rhs, rcond=None)[0][:m]
    if np.any(solution < 0.0):
        return None
    polished = np.zeros_like(w)
    polished[active] = solution / solution.sum()
    return polished


def hull_distance(
    P,
    c: int,
    max_iters: Optional[int] = None,
    tol: float = KKT_TOL,
) -> HullSolution:
    """
    Minimize ||sum_k w_k p_k - p_c|| over the simplex of the other prototypes.

    Accelerated projected gradient with restart on objective increase; the
    problem is translated so p_c sits at the origin and rescaled to unit
    radius before solving, and the KKT residual is measured there.

    Args:
        P: C x d prototype matrix
        c: Class whose distance is measured
        max_iters: Iteration cap (defaults to settings.hull_max_iters)
        tol: KKT residual target

    Returns:
        HullSolution with weights ordered like the other classes ascending

    Raises:
        ParameterError: C < 2 or c out of range
        ConvergenceError: the cap was reached above tol
    """
    P = as_matrix(P, "P")
    C = P.shape[0]
    if C < 2:
        raise ParameterError(f"Hull distance needs at least 2 prototypes, got C={C}")
    if not 0 <= c < C:
        raise ParameterError(f"Class index out of range: c={c}, C={C}")
    max_iters = settings.hull_max_iters if max_iters is None else max_iters

    others = np.delete(P, c, axis=0) - P[c]
    m = others.shape[0]
    scale = float(np.max(np.linalg.norm(others, axis=1)))
    if m == 1 or scale == 0.0:
        weights = np.full(m, 1.0 / m) if scale == 0.0 else np.ones(1)
        distance = float(np.linalg.norm(weights @ others))
        return HullSolution(distance=distance, weights=weights, iterations=0, residual=0.0)

    A = others / scale
    G = A @ A.T
    lipschitz = max(float(np.linalg.eigvalsh(G)[-1]), 1e-12)
    step = 1.0 / lipschitz

    def objective(w: np.ndarray) -> float:
        return 0.5 * float(w @ G @ w)

    w = np.full(m, 1.0 / m)
    y = w.copy()
    momentum = 1.0
    current = objective(w)
    residual = _kkt_residual(G, w)

    iteration = 0
    for iteration in range(1, max_iters + 1):
        w_next = simplex_project(y - step * (G @ y))
        value = objective(w_next)
        if value > current:
            # Restart from the last accepted iterate
            momentum = 1.0
            y = w.copy()
            w_next = simplex_project(w - step * (G @ w))
            value = objective(w_next)
        momentum_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * momentum * momentum))
        y = w_next + ((momentum - 1.0) / momentum_next) * (w_next - w)
        w, current, momentum = w_next, value, momentum_next

        residual = _kkt_residual(G, w)
        if residual <= tol:
            break
        if iteration % POLISH_EVERY == 0:
            polished = _polish(G, w)
            if polished is not None:
                polished_residual = _kkt_residual(G, polished)
                if polished_residual <= tol:
                    w, residual = polished, polished_residual
                    break
    else:
        logger.error(f"Hull solver hit the iteration cap: c={c}, residual={residual:.3e}")
        raise ConvergenceError(f"Hull distance for class {c} did not converge", residual)

    distance = float(np.linalg.norm(w @ others))
    return HullSolution(distance=distance, weights=w, iterations=iteration, residual=residual)


def mean_pairwise_distance(P) -> float:
    """Mean Euclidean distance over all unordered prototype pairs."""
    P = as_matrix(P, "P")
    if P.shape[0] < 2:
        raise ParameterError("Mean pairwise distance needs at least 2 prototypes")
    return float(np.mean(pdist(P)))


def eps_inclusion_margin(P, c: int, R: float, trials: int = 10_000, seed: int = 0) -> float:
    """
    Largest observed score advantage of class c over its best rival.

    Queries are drawn uniformly from the ball ||z|| <= R. The advantage can never
    exceed hull_distance(P, c).distance * R.
    """
    P = as_matrix(P, "P")
    C, d = P.shape
    if C < 2:
        raise ParameterError(f"Need at least 2 prototypes, got C={C}")
    if not 0 <= c < C:
        raise ParameterError(f"Class index out of range: c={c}, C={C}")
    if not R > 0.0:
        raise ParameterError(f"R must be positive, got {R}")
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")

    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((trials, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = R * rng.random(trials) ** (1.0 / d)
    queries = directions * radii[:, None]

    scores = queries @ P.T
    rivals = np.delete(scores, c, axis=1).max(axis=1)
    return float(np.max(scores[:, c] - rivals))
