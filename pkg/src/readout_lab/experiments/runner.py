"""Seed fan-out, aggregation and artifact writing shared by every driver."""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

import numpy as np
import pandas as pd

from readout_lab import __version__
from readout_lab.models import SweepPoint, SweepResult
from readout_lab.utils import get_logger

logger = get_logger(__name__)


def seed_list(seed: int = 0, seeds: int = 20) -> List[int]:
    return [seed + i for i in range(seeds)]


def run_seeds(fn: Callable[[int], Any], seeds: Sequence[int], jobs: int = 1) -> List[Any]:
    """Apply fn to every seed, in parallel when jobs > 1; results keep seed order."""
    if jobs <= 1 or len(seeds) <= 1:
        return [fn(seed) for seed in seeds]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, seeds))


def aggregate(
    variable: str,
    values: Sequence[float],
    per_seed: List[List[Dict[str, float]]],
    seeds: Sequence[int],
    metadata: Dict[str, Any],
) -> SweepResult:
    """
    Mean and std over seeds for every metric at every swept value.

    per_seed[s][i] holds the metrics of seed s at values[i]; nan entries are
    ignored so per-class recalls of absent classes do not poison the mean.
    """
    points = []
    for i, value in enumerate(values):
        metrics: Dict[str, float] = {}
        for name in per_seed[0][i]:
            column = np.array([run[i][name] for run in per_seed], dtype=np.float64)
            finite = column[np.isfinite(column)]
            metrics[f"{name}_mean"] = float(finite.mean()) if finite.size else float("nan")
            metrics[f"{name}_std"] = float(finite.std()) if finite.size else float("nan")
        points.append(SweepPoint(value=float(value), metrics=metrics))
    return SweepResult(
        variable=variable,
        points=points,
        seeds=list(seeds),
        metadata={"version": __version__, **metadata},
    )


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    rows = [{result.variable: point.value, **point.metrics} for point in result.points]
    frame = pd.DataFrame(rows)
    frame["n_seeds"] = len(result.seeds)
    return frame


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.10g")
    logger.info(f"Artifact written: path={path}, rows={len(frame)}")
    return path


def write_json(payload: str, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(payload + "\n")
    logger.info(f"Artifact written: path={path}")
    return path


def write_sweep(result: SweepResult, out_dir: Path | str, stem: str) -> List[Path]:
    """<stem>.csv with one row per swept value and <stem>.json with the full result."""
    out_dir = Path(out_dir)
    return [
        write_frame(sweep_frame(result), out_dir / f"{stem}.csv"),
        write_json(result.model_dump_json(indent=2), out_dir / f"{stem}.json"),
    ]
