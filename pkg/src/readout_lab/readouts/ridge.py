"""Bias-augmented closed-form ridge head, in plain numpy and on the tape."""

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.numcore import Tape, Var, as_matrix, solve_spd
from readout_lab.readouts.common import check_query_dims, validate_onehot
from readout_lab.readouts.types import FittedRidge


def _augment(Z: np.ndarray) -> np.ndarray:
    return np.hstack([Z, np.ones((Z.shape[0], 1))])


def _check_lambda(ridge_lambda: float) -> float:
    ridge_lambda = float(ridge_lambda)
    if not ridge_lambda > 0.0 or not np.isfinite(ridge_lambda):
        raise ParameterError(f"lambda must be positive, got {ridge_lambda}")
    return ridge_lambda


def fit_ridge(Z_s, Y_s, ridge_lambda: float = 10.0) -> FittedRidge:
    """
    Solve [W; b^T] = Z~^T (Z~ Z~^T + lambda I)^{-1} Y_s with Z~ = [Z_s | 1].

    The bias column sits inside the regularized solve.
    """
    ridge_lambda = _check_lambda(ridge_lambda)
    Z_s = as_matrix(Z_s, "Z_s")
    Y_s = validate_onehot(Y_s, Z_s.shape[0])
    Z_aug = _augment(Z_s)
    gram = Z_aug @ Z_aug.T + ridge_lambda * np.eye(Z_aug.shape[0])
    weights = Z_aug.T @ solve_spd(gram, Y_s)
    return FittedRidge(W=weights[:-1], b=weights[-1].copy(), ridge_lambda=ridge_lambda)


def ridge_logits(model: FittedRidge, Z_q) -> np.ndarray:
    """Query logits Z_q W + 1 b^T."""
    Z_q = check_query_dims(Z_q, model.W.shape[0])
    return Z_q @ model.W + model.b[None, :]


def ridge_weights_on_tape(tape: Tape, Z_s: Var, Y_s: np.ndarray, ridge_lambda: float) -> Var:
    """Differentiable [W; b^T] (d_z + 1 x C) as a function of the support embeddings."""
    ridge_lambda = _check_lambda(ridge_lambda)
    Z_aug = tape.append_ones(Z_s)
    n_s = Z_aug.shape[0]
    gram = tape.add(tape.matmul(Z_aug, Z_aug, trans_b=True), tape.constant(ridge_lambda * np.eye(n_s)))
    dual = tape.solve_spd(gram, tape.constant(Y_s))
    return tape.matmul(Z_aug, dual, trans_a=True)


def ridge_logits_on_tape(tape: Tape, weights: Var, Z_q: Var) -> Var:
    """Differentiable query logits [Z_q | 1] [W; b^T]."""
    return tape.matmul(tape.append_ones(Z_q), weights)
