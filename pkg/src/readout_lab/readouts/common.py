"""Helpers shared by every readout head."""

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.numcore import as_matrix


def validate_onehot(Y, n_rows: int | None = None) -> np.ndarray:
    """Return Y as float64 after checking every row is a valid one-hot vector."""
    Y = as_matrix(Y, "Y")
    if n_rows is not None and Y.shape[0] != n_rows:
        raise ParameterError(f"Y has {Y.shape[0]} rows, expected {n_rows}")
    if not np.all((Y == 0.0) | (Y == 1.0)) or not np.all(Y.sum(axis=1) == 1.0):
        raise ParameterError("Y rows must be valid one-hot vectors")
    return Y


def one_hot(labels, n_classes: int) -> np.ndarray:
    """Encode integer labels in [0, n_classes) as an n x C one-hot matrix."""
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise ParameterError(f"labels must lie in [0, {n_classes})")
    Y = np.zeros((labels.size, n_classes))
    Y[np.arange(labels.size), labels] = 1.0
    return Y


def predict(logits) -> np.ndarray:
    """Row-wise argmax; ties go to the lowest class index."""
    return np.argmax(np.asarray(logits), axis=1)


def softmax(logits) -> np.ndarray:
    """Row-wise softmax with per-row max subtraction."""
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def accuracy(logits, labels) -> float:
    """Fraction of rows whose argmax equals the label."""
    labels = np.asarray(labels).reshape(-1)
    return float(np.mean(predict(logits) == labels))


def per_class_recall(logits, labels, n_classes: int) -> np.ndarray:
    """Recall per class; classes with no rows report nan."""
    labels = np.asarray(labels).reshape(-1)
    predictions = predict(logits)
    recall = np.full(n_classes, np.nan)
    for c in range(n_classes):
        members = labels == c
        if members.any():
            recall[c] = float(np.mean(predictions[members] == c))
    return recall


def check_query_dims(Z_q, d_z: int) -> np.ndarray:
    Z_q = as_matrix(Z_q, "Z_q")
    if Z_q.shape[1] != d_z:
        raise ParameterError(f"Query dimension {Z_q.shape[1]} does not match d_z={d_z}")
    return Z_q
