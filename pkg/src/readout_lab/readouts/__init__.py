"""Episode readout heads: prototype, closed-form ridge, logistic and kNN."""

from readout_lab.readouts.common import (
    accuracy,
    one_hot,
    per_class_recall,
    predict,
    softmax,
    validate_onehot,
)
from readout_lab.readouts.logistic import fit_logistic, logistic_logits, logistic_proba
from readout_lab.readouts.neighbors import knn_predict
from readout_lab.readouts.prototype import fit_prototypes, prototype_logits, prototype_softmax
from readout_lab.readouts.ridge import (
    fit_ridge,
    ridge_logits,
    ridge_logits_on_tape,
    ridge_weights_on_tape,
)
from readout_lab.readouts.types import FittedRidge, LogisticModel, PrototypeModel

__all__ = [
    "FittedRidge",
    "LogisticModel",
    "PrototypeModel",
    "accuracy",
    "fit_logistic",
    "fit_prototypes",
    "fit_ridge",
    "knn_predict",
    "logistic_logits",
    "logistic_proba",
    "one_hot",
    "per_class_recall",
    "predict",
    "prototype_logits",
    "prototype_softmax",
    "ridge_logits",
    "ridge_logits_on_tape",
    "ridge_weights_on_tape",
    "softmax",
    "validate_onehot",
]
