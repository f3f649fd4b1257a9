"""Convex-hull inclusion of a bimodal class as its modes separate."""

from functools import partial
from typing import Dict, List, Optional, Sequence

import numpy as np

from readout_lab.config import settings
from readout_lab.errors import ParameterError
from readout_lab.experiments.runner import aggregate, run_seeds, seed_list
from readout_lab.experiments.synthetic import bimodal_split, prototype_matrix
from readout_lab.geometry import hull_distance
from readout_lab.models import SweepResult
from readout_lab.readouts import (
    accuracy,
    fit_logistic,
    fit_prototypes,
    fit_ridge,
    logistic_logits,
    per_class_recall,
    prototype_logits,
    ridge_logits,
)
from readout_lab.utils import get_logger

logger = get_logger(__name__)

DEFAULT_DELTA_GRID = tuple(np.round(np.arange(0.0, 6.01, 0.5), 2))
CLASS_NAMES = ("a", "b", "c")


def _bimodal_seed(
    seed: int, d: int, n_unimodal: int, n_mode: int, delta_grid: Sequence[float], ridge_lambda: float
) -> List[Dict[str, float]]:
    rng = np.random.default_rng(seed)
    rows = []
    for delta in delta_grid:
        split = bimodal_split(delta, rng, d=d, n_unimodal=n_unimodal, n_mode=n_mode)
        Y_s = split.Y_s
        P = prototype_matrix(split)
        proto = prototype_logits(fit_prototypes(split.Z_s, Y_s), split.Z_q)
        ridge = ridge_logits(fit_ridge(split.Z_s, Y_s, ridge_lambda), split.Z_q)
        logistic = logistic_logits(fit_logistic(split.Z_s, Y_s, 1e-2, max_iters=300), split.Z_q)

        row = {
            "d_ch_a": hull_distance(P, 0).distance,
            "proto_acc": accuracy(proto, split.y_q),
            "ridge_acc": accuracy(ridge, split.y_q),
        }
        for prefix, logits in (("proto", proto), ("ridge", ridge)):
            for name, recall in zip(CLASS_NAMES, per_class_recall(logits, split.y_q, 3)):
                row[f"{prefix}_recall_{name}"] = float(recall)
        row["logistic_recall_a"] = float(per_class_recall(logistic, split.y_q, 3)[0])
        rows.append(row)
    return rows


def run_bimodal_sweep(
    d: int = 64,
    n_unimodal: int = 100,
    n_mode: int = 50,
    delta_grid: Optional[Sequence[float]] = None,
    seeds: int = 20,
    seed: int = 0,
    jobs: int = 1,
    ridge_lambda: Optional[float] = None,
) -> SweepResult:
    """
    Sweep the mode separation delta of class A.

    Records d_CH(A) of the support prototypes, per-class recall of the prototype
    and ridge heads, overall accuracies and the logistic head's recall of A.
    """
    delta_grid = list(DEFAULT_DELTA_GRID if delta_grid is None else delta_grid)
    if not delta_grid:
        raise ParameterError("delta_grid must not be empty")
    ridge_lambda = settings.ridge_lambda if ridge_lambda is None else ridge_lambda
    seeds_used = seed_list(seed, seeds)
    fn = partial(
        _bimodal_seed,
        d=d,
        n_unimodal=n_unimodal,
        n_mode=n_mode,
        delta_grid=delta_grid,
        ridge_lambda=ridge_lambda,
    )
    per_seed = run_seeds(fn, seeds_used, jobs)
    result = aggregate(
        "delta",
        delta_grid,
        per_seed,
        seeds_used,
        {
            "experiment": "bimodal",
            "d": d,
            "n_unimodal": n_unimodal,
            "n_mode": n_mode,
            "ridge_lambda": ridge_lambda,
        },
    )
    logger.info(f"Bimodal sweep done: seeds={len(seeds_used)}, deltas={len(delta_grid)}")
    return result


def first_delta(result: SweepResult, metric: str, threshold: float) -> Optional[float]:
    """Smallest swept delta at which metric <= threshold, or None."""
    for point in result.points:
        if point.metrics[metric] <= threshold:
            return point.value
    return None
