"""Calibration of prototype softmax, temperature scaling and logistic heads."""

from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from readout_lab import __version__
from readout_lab.calibration import apply_temperature, ece, reliability_table, temperature_fit
from readout_lab.config import settings
from readout_lab.experiments.runner import run_seeds, seed_list, write_frame, write_json
from readout_lab.experiments.synthetic import calibration_geometry, split_half
from readout_lab.models import CalibrationReport
from readout_lab.readouts import (
    fit_logistic,
    fit_prototypes,
    logistic_proba,
    one_hot,
    prototype_logits,
    softmax,
)
from readout_lab.utils import get_logger

logger = get_logger(__name__)

GEOMETRIES = ("origin-shifted", "varying-radius")
METHODS = ("prototype", "temperature", "logistic")
LOGISTIC_LAMBDA = 1e-4
LOGISTIC_MAX_ITERS = 2000


class CalibrationSummary(BaseModel):
    """Seed-averaged calibration metrics of one method on one geometry"""
    geometry: str
    method: str
    metrics: Dict[str, float]


class CalibrationSuiteResult(BaseModel):
    """Summaries plus pooled reliability diagrams per geometry and method"""
    rows: List[CalibrationSummary]
    reliability: Dict[str, CalibrationReport] = Field(default_factory=dict)
    seeds: List[int]
    metadata: Dict[str, object] = Field(default_factory=dict)

    def metric(self, geometry: str, method: str, name: str = "ece_mean") -> float:
        for row in self.rows:
            if row.geometry == geometry and row.method == method:
                return row.metrics[name]
        raise KeyError(f"{geometry}/{method}")


def _calibration_seed(seed: int, geometry: str, n: int, C: int, d: int, n_bins: int):
    rng = np.random.default_rng(seed)
    Z, labels = calibration_geometry(geometry, rng, n=n, C=C, d=d)
    split = split_half(Z, labels, rng)
    Y_s = one_hot(split.y_s, C)

    model = fit_prototypes(split.Z_s, Y_s)
    support_logits = prototype_logits(model, split.Z_s)
    query_logits = prototype_logits(model, split.Z_q)
    fit = temperature_fit(support_logits, split.y_s)
    logistic = fit_logistic(split.Z_s, Y_s, LOGISTIC_LAMBDA, max_iters=LOGISTIC_MAX_ITERS)

    probs = {
        "prototype": softmax(query_logits),
        "temperature": apply_temperature(query_logits, fit.temperature),
        "logistic": logistic_proba(logistic, split.Z_q),
    }
    metrics = {}
    for method, p in probs.items():
        report = ece(p, split.y_q, n_bins)
        metrics[method] = {
            "ece": report.ece,
            "mce": report.mce,
            "brier": report.brier,
            "accuracy": report.accuracy,
        }
    metrics["temperature"]["temperature"] = fit.temperature
    return metrics, {method: p for method, p in probs.items()}, split.y_q


def run_calibration_suite(
    n: int = 500,
    C: int = 5,
    d: int = 64,
    seeds: int = 20,
    seed: int = 0,
    jobs: int = 1,
    geometries: Sequence[str] = GEOMETRIES,
    n_bins: Optional[int] = None,
) -> CalibrationSuiteResult:
    """
    ECE, MCE and Brier score of three probability sources per geometry.

    Temperatures are fitted on the support prototype logits. Reliability
    diagrams pool the query predictions of every seed.
    """
    n_bins = settings.n_bins if n_bins is None else n_bins
    seeds_used = seed_list(seed, seeds)
    rows: List[CalibrationSummary] = []
    reliability: Dict[str, CalibrationReport] = {}

    for geometry in geometries:
        fn = partial(_calibration_seed, geometry=geometry, n=n, C=C, d=d, n_bins=n_bins)
        outputs = run_seeds(fn, seeds_used, jobs)
        for method in METHODS:
            per_seed = [out[0][method] for out in outputs]
            summary = {}
            for name in per_seed[0]:
                column = np.array([entry[name] for entry in per_seed])
                summary[f"{name}_mean"] = float(column.mean())
                summary[f"{name}_std"] = float(column.std())
            rows.append(CalibrationSummary(geometry=geometry, method=method, metrics=summary))

            pooled_probs = np.vstack([out[1][method] for out in outputs])
            pooled_labels = np.concatenate([out[2] for out in outputs])
            reliability[f"{geometry}/{method}"] = ece(pooled_probs, pooled_labels, n_bins)
        logger.info(
            f"Calibration geometry done: geometry={geometry}, "
            + ", ".join(f"{row.method}={row.metrics['ece_mean']:.3f}" for row in rows[-3:])
        )

    return CalibrationSuiteResult(
        rows=rows,
        reliability=reliability,
        seeds=seeds_used,
        metadata={"experiment": "calibration", "version": __version__, "n": n, "C": C, "d": d,
                  "n_bins": n_bins, "logistic_lambda": LOGISTIC_LAMBDA},
    )


def write_calibration(result: CalibrationSuiteResult, out_dir: Path | str) -> List[Path]:
    """calibration.csv (one row per geometry/method), reliability.csv and calibration.json."""
    out_dir = Path(out_dir)
    summary = pd.DataFrame(
        [{"geometry": row.geometry, "method": row.method, **row.metrics} for row in result.rows]
    )
    summary["n_seeds"] = len(result.seeds)
    tables = []
    for key, report in result.reliability.items():
        geometry, method = key.split("/")
        table = reliability_table(report)
        table.insert(0, "method", method)
        table.insert(0, "geometry", geometry)
        tables.append(table)
    return [
        write_frame(summary, out_dir / "calibration.csv"),
        write_frame(pd.concat(tables, ignore_index=True), out_dir / "reliability.csv"),
        write_json(result.model_dump_json(indent=2), out_dir / "calibration.json"),
    ]
