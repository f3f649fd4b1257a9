"""Audit inputs and run manifests."""

import hashlib
from pathlib import Path
from typing import Dict, Iterable, Tuple

import numpy as np
import pandas as pd

from readout_lab import __version__
from readout_lab.errors import InsufficientClassesError, ValidationError
from readout_lab.metatrain.checkpoint import MAGIC, parse_matrices
from readout_lab.models import RunManifest
from readout_lab.utils import get_logger

logger = get_logger(__name__)

EMBEDDINGS_KEY = "embeddings"


def read_embeddings(path: Path | str) -> np.ndarray:
    """
    Load an n x d embedding matrix.

    Binary files use the checkpoint payload layout and must hold a single
    matrix or one named "embeddings"; anything else is read as header-free CSV.
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"Embeddings file not found: {path}")
    data = path.read_bytes()
    if data.startswith(MAGIC):
        matrices, _ = parse_matrices(data)
        if EMBEDDINGS_KEY in matrices:
            return matrices[EMBEDDINGS_KEY]
        if len(matrices) != 1:
            raise ValidationError(
                f"Binary embeddings must hold one matrix or one named {EMBEDDINGS_KEY!r}, "
                f"found {sorted(matrices)}"
            )
        return next(iter(matrices.values()))
    try:
        frame = pd.read_csv(path, header=None, dtype=np.float64)
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Embeddings CSV is malformed: {path}: {e}") from None
    Z = frame.to_numpy()
    if not np.all(np.isfinite(Z)):
        raise ValidationError(f"Embeddings contain missing or non-finite values: {path}")
    return Z


def read_labels(path: Path | str) -> np.ndarray:
    """One integer class id per line."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"Labels file not found: {path}")
    try:
        frame = pd.read_csv(path, header=None, dtype=np.int64)
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Labels file is malformed: {path}: {e}") from None
    if frame.shape[1] != 1:
        raise ValidationError(f"Labels file must have one column, got {frame.shape[1]}")
    return frame.iloc[:, 0].to_numpy()


def encode_labels(labels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Map arbitrary class ids to 0..C-1 in sorted order; returns (ids, indices)."""
    classes, indices = np.unique(labels, return_inverse=True)
    if classes.size < 2:
        raise InsufficientClassesError(f"Insufficient classes: audit needs at least 2, got {classes.size}")
    return classes, indices


def file_checksum(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(
    command: str,
    config: Dict[str, object],
    out_dir: Path,
    artifacts: Iterable[Path],
    seeds: Iterable[int] = (),
) -> Path:
    """manifest_<command>.json: resolved config and sha256 per artifact path under out_dir."""
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        command=command,
        version=__version__,
        config=config,
        seeds=list(seeds),
        out_dir=str(out_dir),
        artifacts={p.relative_to(out_dir).as_posix(): file_checksum(p) for p in sorted(artifacts)},
    )
    path = out_dir / f"manifest_{command.replace(' ', '_')}.json"
    path.write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.info(f"Manifest written: path={path}, artifacts={len(manifest.artifacts)}")
    return path
