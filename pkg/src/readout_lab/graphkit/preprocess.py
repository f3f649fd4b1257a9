"""Normalized adjacency, SVD feature alignment and hop propagation."""

from typing import Optional

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.graphkit.types import GraphData, HopStack
from readout_lab.numcore import as_matrix, truncated_svd


def adjacency(G: GraphData) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix."""
    A = np.zeros((G.n, G.n))
    if G.n_edges:
        A[G.edges[:, 0], G.edges[:, 1]] = 1.0
        A[G.edges[:, 1], G.edges[:, 0]] = 1.0
    return A


def sym_normalize(G: GraphData) -> np.ndarray:
    """D^{-1/2} A D^{-1/2}; rows and columns of isolated nodes stay zero."""
    A = adjacency(G)
    degree = A.sum(axis=1)
    inv_sqrt = np.zeros_like(degree)
    nonzero = degree > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(degree[nonzero])
    return inv_sqrt[:, None] * A * inv_sqrt[None, :]


def _svd_features(M: np.ndarray, k: int, width: int, power_iters: Optional[int], seed: int):
    result = truncated_svd(M, k, power_iters=power_iters, seed=seed)
    features = result.U * result.S[None, :]
    if k < width:
        features = np.pad(features, ((0, 0), (0, width - k)))
    return features


def align_features(
    G: GraphData,
    d_target: int = 16,
    power_iters: Optional[int] = None,
    seed: int = 0,
    A_norm: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Fixed-width node inputs from truncated SVDs.

    Featureless graphs get U diag(S) of the normalized adjacency. Graphs with
    node features get half the columns from the adjacency SVD and half from
    the feature SVD; a feature block of rank below its width is zero-padded.
    """
    if d_target < 1 or d_target > G.n:
        raise ParameterError(f"d_target must lie in [1, n={G.n}], got {d_target}")
    A_norm = sym_normalize(G) if A_norm is None else A_norm

    if G.node_features is None:
        return _svd_features(A_norm, d_target, d_target, power_iters, seed)

    X = as_matrix(G.node_features, "node_features")
    feature_width = d_target // 2
    structure_width = d_target - feature_width
    structure = _svd_features(A_norm, structure_width, structure_width, power_iters, seed)
    if feature_width == 0:
        return structure
    k = min(feature_width, X.shape[0], X.shape[1])
    features = _svd_features(X, k, feature_width, power_iters, seed + 1)
    return np.hstack([structure, features])


def hop_stack(X0, A_norm, ell: int = 3) -> HopStack:
    """[X0, X0 A, ..., X0 A^ell] built incrementally; arrays are read-only."""
    X0 = as_matrix(X0, "X0")
    A_norm = as_matrix(A_norm, "A_norm")
    if ell < 0:
        raise ParameterError(f"ell must be non-negative, got {ell}")
    if A_norm.shape != (X0.shape[0], X0.shape[0]):
        raise ParameterError(f"A_norm shape {A_norm.shape} does not match n={X0.shape[0]}")

    hops = [X0.copy()]
    for _ in range(ell):
        hops.append(A_norm @ hops[-1])
    for hop in hops:
        hop.setflags(write=False)
    return HopStack(hops=tuple(hops))
