"""Prototype collapse under a global translation of the embedding cloud."""

from functools import partial
from typing import Dict, List, Optional, Sequence

import numpy as np

from readout_lab.config import settings
from readout_lab.errors import ParameterError
from readout_lab.experiments.runner import aggregate, run_seeds, seed_list
from readout_lab.experiments.synthetic import split_half, two_clusters
from readout_lab.models import SweepResult
from readout_lab.readouts import (
    accuracy,
    fit_prototypes,
    fit_ridge,
    knn_predict,
    one_hot,
    prototype_logits,
    ridge_logits,
)
from readout_lab.utils import get_logger

logger = get_logger(__name__)

DEFAULT_T_GRID = tuple(np.round(np.arange(0.0, 5.01, 0.5), 2))


def _translation_seed(
    seed: int, n: int, d: int, margin: float, t_grid: Sequence[float], ridge_lambda: float
) -> List[Dict[str, float]]:
    rng = np.random.default_rng(seed)
    Z, labels, u = two_clusters(n, d, margin, rng)
    split = split_half(Z, labels, rng)
    Y_s = one_hot(split.y_s, 2)
    rows = []
    for t in t_grid:
        shift = t * u[None, :]
        Z_s, Z_q = split.Z_s + shift, split.Z_q + shift
        proto = prototype_logits(fit_prototypes(Z_s, Y_s), Z_q)
        ridge = ridge_logits(fit_ridge(Z_s, Y_s, ridge_lambda), Z_q)
        knn = knn_predict(Z_s, split.y_s, Z_q, k=1)
        rows.append(
            {
                "proto_acc": accuracy(proto, split.y_q),
                "ridge_acc": accuracy(ridge, split.y_q),
                "knn_acc": float(np.mean(knn == split.y_q)),
            }
        )
    return rows


def run_translation_sweep(
    n: int = 800,
    d: int = 64,
    margin: float = 6.0,
    t_grid: Optional[Sequence[float]] = None,
    seeds: int = 20,
    seed: int = 0,
    jobs: int = 1,
    ridge_lambda: Optional[float] = None,
) -> SweepResult:
    """
    Translate two unit-variance clusters by t u along their separation axis.

    Reports prototype, ridge and 1-NN query accuracy per t (mean and std over seeds).
    """
    t_grid = list(DEFAULT_T_GRID if t_grid is None else t_grid)
    if not t_grid:
        raise ParameterError("t_grid must not be empty")
    ridge_lambda = settings.ridge_lambda if ridge_lambda is None else ridge_lambda
    seeds_used = seed_list(seed, seeds)
    fn = partial(_translation_seed, n=n, d=d, margin=margin, t_grid=t_grid, ridge_lambda=ridge_lambda)
    per_seed = run_seeds(fn, seeds_used, jobs)
    result = aggregate(
        "t",
        t_grid,
        per_seed,
        seeds_used,
        {"experiment": "translation", "n": n, "d": d, "margin": margin, "ridge_lambda": ridge_lambda},
    )
    logger.info(
        f"Translation sweep done: seeds={len(seeds_used)}, "
        f"proto_acc_last={result.points[-1].metrics['proto_acc_mean']:.3f}"
    )
    return result
