"""Dense linear algebra, randomized SVD, and the reverse-mode tape."""

from readout_lab.numcore.linalg import (
    SVDResult,
    as_matrix,
    cholesky_factor,
    cholesky_solve,
    pca_project,
    solve_spd,
    truncated_svd,
)
from readout_lab.numcore.tape import Tape, Var
from readout_lab.numcore.gradcheck import analytic_gradients, grad_check

__all__ = [
    "SVDResult",
    "Tape",
    "Var",
    "analytic_gradients",
    "as_matrix",
    "cholesky_factor",
    "cholesky_solve",
    "grad_check",
    "pca_project",
    "solve_spd",
    "truncated_svd",
]
