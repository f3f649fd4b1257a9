"""Episode references and their assembled embedding matrices."""

from typing import NamedTuple, Tuple

import numpy as np

from readout_lab.models import TaskKind


class Episode(NamedTuple):
    """
    One few-shot task.

    Refs are node ids (node), E x 2 node pairs (edge) or graph ids (graph);
    labels are episode-local class indices in [0, C). classes maps each local
    index back to the source class id (edge episodes use 0 = non-edge, 1 = edge).
    """
    task: TaskKind
    support_refs: np.ndarray
    support_labels: np.ndarray
    query_refs: np.ndarray
    query_labels: np.ndarray
    classes: Tuple[int, ...]
    K: int
    Q: int

    @property
    def C(self) -> int:
        return len(self.classes)

    @property
    def n_support(self) -> int:
        return int(self.support_labels.size)

    @property
    def n_query(self) -> int:
        return int(self.query_labels.size)


class AssembledEpisode(NamedTuple):
    """Readout inputs: support/query embeddings with one-hot labels."""
    Z_s: np.ndarray
    Y_s: np.ndarray
    Z_q: np.ndarray
    Y_q: np.ndarray
