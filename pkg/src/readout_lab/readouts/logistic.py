"""Multinomial logistic regression head trained by full-batch gradient descent."""

import numpy as np

from readout_lab.errors import DivergenceError, ParameterError
from readout_lab.numcore import as_matrix
from readout_lab.readouts.common import check_query_dims, softmax, validate_onehot
from readout_lab.readouts.types import LogisticModel
from readout_lab.utils import get_logger

logger = get_logger(__name__)


def _objective(Xc, Y, W, b, ridge_lambda):
    logits = Xc @ W + b[None, :]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = -np.sum(Y * (shifted - log_norm)) / Xc.shape[0] + 0.5 * ridge_lambda * np.sum(W * W)
    return float(loss), np.exp(shifted - log_norm)


def fit_logistic(
    Z_s,
    Y_s,
    ridge_lambda: float = 1e-3,
    max_iters: int = 1000,
    tol: float = 1e-6,
) -> LogisticModel:
    """
    Minimize mean cross-entropy + lambda/2 ||W||^2 with an unregularized bias.

    Features are centered internally; because the bias is free, the optimum is
    the same as on raw features and the returned bias is expressed for raw inputs.
    Step sizes come from an Armijo backtracking search.

    Raises:
        ParameterError: on invalid lambda, iteration cap or tolerance
        DivergenceError: if the objective becomes non-finite
    """
    if not ridge_lambda >= 0.0:
        raise ParameterError(f"lambda must be non-negative, got {ridge_lambda}")
    if max_iters < 1 or not tol > 0.0:
        raise ParameterError(f"Invalid optimizer settings: max_iters={max_iters}, tol={tol}")
    Z_s = as_matrix(Z_s, "Z_s")
    Y_s = validate_onehot(Y_s, Z_s.shape[0])
    n, d = Z_s.shape
    C = Y_s.shape[1]

    mean = Z_s.mean(axis=0)
    Xc = Z_s - mean
    W = np.zeros((d, C))
    b = np.zeros(C)
    step = 1.0
    loss, probs = _objective(Xc, Y_s, W, b, ridge_lambda)
    converged = False
    iterations = 0

    for iterations in range(1, max_iters + 1):
        residual = (probs - Y_s) / n
        grad_W = Xc.T @ residual + ridge_lambda * W
        grad_b = residual.sum(axis=0)
        grad_sq = float(np.sum(grad_W * grad_W) + np.sum(grad_b * grad_b))
        if np.sqrt(grad_sq) <= tol:
            converged = True
            iterations -= 1
            break

        step = min(step * 2.0, 1e6)
        while True:
            W_next = W - step * grad_W
            b_next = b - step * grad_b
            loss_next, probs_next = _objective(Xc, Y_s, W_next, b_next, ridge_lambda)
            if not np.isfinite(loss_next):
                step *= 0.5
            elif loss_next <= loss - 0.5 * step * grad_sq:
                break
            else:
                step *= 0.5
            if step < 1e-20:
                raise DivergenceError(f"Line search failed at iteration {iterations}, loss={loss}")
        W, b, loss, probs = W_next, b_next, loss_next, probs_next
        if not np.isfinite(loss):
            raise DivergenceError(f"Non-finite logistic objective at iteration {iterations}")
    else:
        logger.debug(f"Logistic head hit the iteration cap: max_iters={max_iters}, loss={loss:.6g}")

    bias = b - mean @ W
    return LogisticModel(
        W=W, b=bias, ridge_lambda=float(ridge_lambda), iterations_used=iterations, converged=converged
    )


def logistic_logits(model: LogisticModel, Z_q) -> np.ndarray:
    Z_q = check_query_dims(Z_q, model.W.shape[0])
    return Z_q @ model.W + model.b[None, :]


def logistic_proba(model: LogisticModel, Z_q) -> np.ndarray:
    """Class probabilities for each query row."""
    return softmax(logistic_logits(model, Z_q))
