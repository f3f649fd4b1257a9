"""Dense linear-algebra primitives: SPD solves, randomized SVD, PCA."""

from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import lapack

from readout_lab.config import settings
from readout_lab.errors import NotPositiveDefiniteError, ParameterError
from readout_lab.utils import get_logger


logger = get_logger(__name__)

SYMMETRY_RTOL = 1e-10


class SVDResult(NamedTuple):
    """Truncated singular value decomposition M ~ U diag(S) V^T."""
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float64 array or raise ParameterError."""
    array = np.asarray(value, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
        raise ParameterError(f"{name} must be a non-empty 2-D matrix, got shape={array.shape}")
    if not np.all(np.isfinite(array)):
        raise ParameterError(f"{name} contains non-finite entries")
    return array


def cholesky_factor(K: np.ndarray) -> np.ndarray:
    """
    Lower-triangular Cholesky factor of a symmetric positive-definite matrix.

    Args:
        K: Symmetric positive-definite n x n matrix

    Returns:
        Lower-triangular L with L L^T = K

    Raises:
        ParameterError: K is not square or not symmetric
        NotPositiveDefiniteError: a pivot is non-positive (0-based index attached)
    """
    K = as_matrix(K, "K")
    n, m = K.shape
    if n != m:
        raise ParameterError(f"K must be square, got shape={K.shape}")
    scale = max(float(np.max(np.abs(K))), 1.0)
    if float(np.max(np.abs(K - K.T))) > SYMMETRY_RTOL * scale:
        raise ParameterError("K must be symmetric")

    factor, info = lapack.dpotrf(K, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        logger.debug(f"Cholesky failed: n={n}, pivot={info - 1}")
        raise NotPositiveDefiniteError(info - 1)
    if info < 0:
        raise ParameterError(f"dpotrf rejected argument {-info}")
    return factor


def cholesky_solve(factor: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve K X = B given the lower Cholesky factor of K."""
    solution, info = lapack.dpotrs(factor, B, lower=1)
    if info != 0:
        raise ParameterError(f"dpotrs rejected argument {-info}")
    return solution


def solve_spd(K, B) -> np.ndarray:
    """
    Solve K X = B for symmetric positive-definite K via Cholesky.

    Neither input is modified.
    """
    B = as_matrix(B, "B")
    factor = cholesky_factor(K)
    if B.shape[0] != factor.shape[0]:
        raise ParameterError(f"B has {B.shape[0]} rows but K is {factor.shape[0]}x{factor.shape[0]}")
    return cholesky_solve(factor, B.copy())


def _flip_signs(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Largest-magnitude entry of each V column is made positive
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs, V * signs


def truncated_svd(
    M,
    k: int,
    power_iters: Optional[int] = None,
    seed: int = 0,
    oversample: Optional[int] = None,
) -> SVDResult:
    """
    Randomized rank-k SVD with a Gaussian range finder and power iterations.

    Args:
        M: n x m matrix
        k: Target rank, 1 <= k <= min(n, m)
        power_iters: Subspace iterations (defaults to settings.svd_power_iters)
        seed: Seed for the Gaussian test matrix
        oversample: Extra test columns beyond k (defaults to settings.svd_oversample)

    Returns:
        SVDResult with U (n x k), S (k,), V (m x k)
    """
    M = as_matrix(M, "M")
    n, m = M.shape
    if not 1 <= k <= min(n, m):
        raise ParameterError(f"k must lie in [1, {min(n, m)}], got k={k}")
    power_iters = settings.svd_power_iters if power_iters is None else power_iters
    oversample = settings.svd_oversample if oversample is None else oversample
    if power_iters < 0 or oversample < 0:
        raise ParameterError("power_iters and oversample must be non-negative")

    width = min(k + oversample, min(n, m))
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((m, width))

    Q, _ = np.linalg.qr(M @ omega)
    for _ in range(power_iters):
        W, _ = np.linalg.qr(M.T @ Q)
        Q, _ = np.linalg.qr(M @ W)

    small = Q.T @ M
    U_small, S, Vt = np.linalg.svd(small, full_matrices=False)
    U = Q @ U_small[:, :k]
    U, V = _flip_signs(U, Vt[:k].T)
    return SVDResult(U=U, S=S[:k].copy(), V=V)


def pca_project(X, k: int) -> np.ndarray:
    """
    Project mean-centered rows of X onto their top-k principal directions.

    Returns:
        n x k matrix whose column variances are non-increasing
    """
    X = as_matrix(X, "X")
    n, d = X.shape
    if n < 2:
        raise ParameterError(f"PCA needs at least 2 rows, got n={n}")
    if not 1 <= k <= d:
        raise ParameterError(f"k must lie in [1, {d}], got k={k}")

    centered = X - X.mean(axis=0, keepdims=True)
    _, _, Vt = np.linalg.svd(centered, full_matrices=False)
    components = Vt[:k].T
    if components.shape[1] < k:
        components = np.pad(components, ((0, 0), (0, k - components.shape[1])))
    _, components = _flip_signs(np.zeros((1, k)), components)
    return centered @ components
