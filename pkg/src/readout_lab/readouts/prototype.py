"""Origin-anchored prototype classifier."""

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.numcore import as_matrix
from readout_lab.readouts.common import check_query_dims, softmax, validate_onehot
from readout_lab.readouts.types import PrototypeModel


def fit_prototypes(Z_s, Y_s) -> PrototypeModel:
    """
    Average the support embeddings of each class.

    Args:
        Z_s: n_s x d_z support embeddings
        Y_s: n_s x C one-hot labels

    Returns:
        PrototypeModel whose row c is the mean of class-c supports
    """
    Z_s = as_matrix(Z_s, "Z_s")
    Y_s = validate_onehot(Y_s, Z_s.shape[0])
    counts = Y_s.sum(axis=0)
    if Y_s.shape[1] < 2:
        raise ParameterError(f"Prototype model needs at least 2 classes, got {Y_s.shape[1]}")
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise ParameterError(f"Class without support: class={int(empty[0])}")
    prototypes = (Y_s.T @ Z_s) / counts[:, None]
    return PrototypeModel(prototypes=prototypes, class_counts=counts.astype(np.int64))


def prototype_logits(model: PrototypeModel, Z_q) -> np.ndarray:
    """Inner products <z_q, p_c> for every query and class."""
    Z_q = check_query_dims(Z_q, model.prototypes.shape[1])
    return Z_q @ model.prototypes.T


def prototype_softmax(model: PrototypeModel, Z_q) -> np.ndarray:
    """Softmax over prototype inner products."""
    return softmax(prototype_logits(model, Z_q))
