"""Binned calibration errors over predicted probabilities."""

from typing import Optional

import numpy as np
import pandas as pd

from readout_lab.config import settings
from readout_lab.errors import ParameterError, ValidationError
from readout_lab.models import CalibrationReport, ReliabilityBin

PROB_SUM_TOL = 1e-6


def validate_probabilities(probs, labels) -> tuple[np.ndarray, np.ndarray]:
    """Check probability rows and integer labels; return them as arrays."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels).reshape(-1)
    if probs.ndim != 2 or probs.shape[0] == 0:
        raise ValidationError(f"Probabilities must be a non-empty n x C matrix, got shape={probs.shape}")
    if labels.size != probs.shape[0]:
        raise ValidationError(f"Got {labels.size} labels for {probs.shape[0]} probability rows")
    if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
        raise ValidationError("Probabilities must be finite and non-negative")
    row_error = np.abs(probs.sum(axis=1) - 1.0)
    if np.any(row_error > PROB_SUM_TOL):
        bad = int(np.argmax(row_error))
        raise ValidationError(f"Probability row does not sum to 1: row={bad}, sum={probs[bad].sum():.8f}")
    if not np.issubdtype(labels.dtype, np.integer):
        if not np.all(labels == np.round(labels)):
            raise ValidationError("Labels must be integers")
        labels = labels.astype(np.int64)
    if labels.min() < 0 or labels.max() >= probs.shape[1]:
        raise ValidationError(f"Labels must lie in [0, {probs.shape[1]})")
    return probs, labels


def brier_score(probs, labels) -> float:
    """Mean squared distance between probability rows and one-hot labels."""
    probs, labels = validate_probabilities(probs, labels)
    targets = np.zeros_like(probs)
    targets[np.arange(labels.size), labels] = 1.0
    return float(np.mean(np.sum((probs - targets) ** 2, axis=1)))


def ece(probs, labels, n_bins: Optional[int] = None) -> CalibrationReport:
    """
    Expected calibration error over equal-width confidence bins.

    Bins are half-open [lo, hi) except the last, which also holds confidence 1.0.
    The report also carries the maximum bin gap (MCE) and the Brier score.
    """
    probs, labels = validate_probabilities(probs, labels)
    n_bins = settings.n_bins if n_bins is None else n_bins
    if n_bins < 1:
        raise ParameterError(f"n_bins must be positive, got {n_bins}")

    confidence = probs.max(axis=1)
    correct = (np.argmax(probs, axis=1) == labels).astype(np.float64)
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    index = np.clip(np.searchsorted(edges, confidence, side="right") - 1, 0, n_bins - 1)

    n = labels.size
    bins = []
    ece_value = 0.0
    mce_value = 0.0
    for b in range(n_bins):
        members = index == b
        count = int(members.sum())
        if count == 0:
            bins.append(ReliabilityBin(lower=float(edges[b]), upper=float(edges[b + 1])))
            continue
        bin_conf = float(np.clip(confidence[members].mean(), 0.0, 1.0))
        bin_acc = float(correct[members].mean())
        gap = abs(bin_acc - bin_conf)
        ece_value += count / n * gap
        mce_value = max(mce_value, gap)
        bins.append(
            ReliabilityBin(
                lower=float(edges[b]),
                upper=float(edges[b + 1]),
                confidence=bin_conf,
                accuracy=bin_acc,
                count=count,
            )
        )

    return CalibrationReport(
        n_bins=n_bins,
        n_samples=n,
        bins=bins,
        ece=float(min(ece_value, 1.0)),
        mce=float(min(mce_value, 1.0)),
        brier=brier_score(probs, labels),
        accuracy=float(correct.mean()),
    )


def reliability_table(report: CalibrationReport) -> pd.DataFrame:
    """One row per bin: lower, upper, confidence, accuracy, count."""
    return pd.DataFrame([bin_.model_dump() for bin_ in report.bins])
