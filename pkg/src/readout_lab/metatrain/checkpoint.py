"""Versioned binary checkpoints.

Layout (little-endian)::

    b"MCHI1"
    u32 matrix count
    per matrix: u16 name length, utf-8 name, u32 rows, u32 cols, rows*cols float64 row-major
    u32 metadata length, utf-8 JSON metadata (sorted keys)

The same payload convention carries plain embedding matrices for the audit command.
"""

import json
import struct
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from readout_lab.errors import ValidationError
from readout_lab.metatrain.encoder import EncoderParams
from readout_lab.models import EncoderVariant
from readout_lab.utils import get_logger

logger = get_logger(__name__)

MAGIC = b"MCHI1"


def dump_matrices(matrices: Dict[str, np.ndarray], metadata: Optional[Dict[str, Any]] = None) -> bytes:
    chunks = [MAGIC, struct.pack("<I", len(matrices))]
    for name, value in matrices.items():
        encoded = name.encode("utf-8")
        matrix = np.ascontiguousarray(value, dtype="<f8")
        if matrix.ndim != 2:
            raise ValidationError(f"Matrix {name!r} must be 2-D, got ndim={matrix.ndim}")
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<II", *matrix.shape))
        chunks.append(matrix.tobytes(order="C"))
    blob = json.dumps(metadata or {}, sort_keys=True, default=str).encode("utf-8")
    chunks.append(struct.pack("<I", len(blob)))
    chunks.append(blob)
    return b"".join(chunks)


def parse_matrices(data: bytes) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    """
    Decode a payload into its named matrices (in file order) and metadata.

    Raises:
        ValidationError: bad magic, truncation, trailing bytes or invalid metadata
    """
    if not data.startswith(MAGIC):
        raise ValidationError("Not a checkpoint: bad magic bytes")
    offset = len(MAGIC)

    def take(fmt: str):
        nonlocal offset
        size = struct.calcsize(fmt)
        if offset + size > len(data):
            raise ValidationError("Truncated checkpoint")
        values = struct.unpack_from(fmt, data, offset)
        offset += size
        return values

    def take_bytes(size: int) -> bytes:
        nonlocal offset
        if offset + size > len(data):
            raise ValidationError("Truncated checkpoint")
        chunk = data[offset:offset + size]
        offset += size
        return chunk

    (count,) = take("<I")
    matrices: Dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = take("<H")
        name = take_bytes(name_len).decode("utf-8")
        rows, cols = take("<II")
        payload = take_bytes(8 * rows * cols)
        matrices[name] = np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)
    (meta_len,) = take("<I")
    try:
        metadata = json.loads(take_bytes(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ValidationError(f"Invalid checkpoint metadata: {e}") from None
    if offset != len(data):
        raise ValidationError("Trailing bytes after checkpoint metadata")
    return matrices, metadata


def dump_checkpoint(params: EncoderParams, metadata: Optional[Dict[str, Any]] = None) -> bytes:
    meta = {"variant": params.variant.value, "dropout": params.dropout, **(metadata or {})}
    return dump_matrices(params.weights, meta)


def parse_checkpoint(data: bytes) -> Tuple[EncoderParams, Dict[str, Any]]:
    weights, metadata = parse_matrices(data)
    if "variant" not in metadata or "dropout" not in metadata:
        raise ValidationError("Checkpoint metadata lacks variant or dropout")
    params = EncoderParams(
        variant=EncoderVariant(metadata["variant"]), weights=weights, dropout=float(metadata["dropout"])
    )
    return params, metadata


def save_checkpoint(params: EncoderParams, path: Path | str, metadata: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dump_checkpoint(params, metadata))
    logger.info(f"Checkpoint written: path={path}, matrices={len(params.weights)}")
    return path


def load_checkpoint(path: Path | str) -> Tuple[EncoderParams, Dict[str, Any]]:
    return parse_checkpoint(Path(path).read_bytes())
