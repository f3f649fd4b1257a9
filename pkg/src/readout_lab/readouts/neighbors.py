"""Nearest-neighbour baseline over support embeddings."""

import numpy as np
from scipy.spatial.distance import cdist

from readout_lab.errors import ParameterError
from readout_lab.numcore import as_matrix


def knn_predict(Z_s, labels_s, Z_q, k: int = 1) -> np.ndarray:
    """
    Majority vote among the k nearest supports (Euclidean).

    Ties in distance keep the lower support index; ties in votes keep the lower class.
    """
    Z_s = as_matrix(Z_s, "Z_s")
    Z_q = as_matrix(Z_q, "Z_q")
    labels_s = np.asarray(labels_s, dtype=np.int64).reshape(-1)
    if labels_s.size != Z_s.shape[0]:
        raise ParameterError(f"labels_s has {labels_s.size} entries, expected {Z_s.shape[0]}")
    if Z_q.shape[1] != Z_s.shape[1]:
        raise ParameterError("Query and support dimensions differ")
    if not 1 <= k <= Z_s.shape[0]:
        raise ParameterError(f"k must lie in [1, {Z_s.shape[0]}], got {k}")

    distances = cdist(Z_q, Z_s)
    nearest = np.argsort(distances, axis=1, kind="stable")[:, :k]
    votes = labels_s[nearest]
    n_classes = int(labels_s.max()) + 1
    counts = np.zeros((Z_q.shape[0], n_classes), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(Z_q.shape[0]), k), votes.reshape(-1)), 1)
    return np.argmax(counts, axis=1)
