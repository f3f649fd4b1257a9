import numpy as np
import pytest

from readout_lab.config import settings
from readout_lab.main import main

# Two-dimensional layout where the four-mode class 0 averages to the midpoint of classes 1 and 2
PLANE_EMBEDDINGS = np.array(
    [
        [-3.0, 1.0], [-3.0, -1.0], [3.0, 1.0], [3.0, -1.0],
        [-2.0, 0.0], [-1.0, 0.0],
        [1.0, 0.0], [2.0, 0.0],
    ]
)
PLANE_LABELS = np.array([0, 0, 0, 0, 1, 1, 2, 2])


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "runs"
    path.mkdir()
    return path


@pytest.fixture
def run_cli(monkeypatch, tmp_path):
    """Invoke the console entry point with a default output directory under tmp_path."""
    monkeypatch.setattr(settings, "out", tmp_path / "default-out")

    def run(*argv):
        return main([str(arg) for arg in argv])

    return run


@pytest.fixture
def write_audit_inputs(tmp_path):
    """Write embeddings and labels CSVs; returns their paths."""

    def write(embeddings, labels, stem="audit"):
        embeddings_path = tmp_path / f"{stem}_embeddings.csv"
        labels_path = tmp_path / f"{stem}_labels.csv"
        np.savetxt(embeddings_path, np.asarray(embeddings, dtype=np.float64), delimiter=",")
        np.savetxt(labels_path, np.asarray(labels, dtype=np.int64), fmt="%d")
        return embeddings_path, labels_path

    return write


@pytest.fixture
def plane_layout():
    return PLANE_EMBEDDINGS.copy(), PLANE_LABELS.copy()
