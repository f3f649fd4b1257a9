"""Graph containers."""

from typing import NamedTuple, Optional, Tuple

import numpy as np


class GraphData(NamedTuple):
    """Undirected simple graph; edges is an E x 2 int array with u < v, sorted."""
    n: int
    edges: np.ndarray
    node_features: Optional[np.ndarray] = None
    node_labels: Optional[np.ndarray] = None
    graph_label: Optional[int] = None

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])


class HopStack(NamedTuple):
    """Frozen propagations X0 A^k for k = 0..ell."""
    hops: Tuple[np.ndarray, ...]

    @property
    def ell(self) -> int:
        return len(self.hops) - 1

    @property
    def n(self) -> int:
        return int(self.hops[0].shape[0])

    @property
    def dim(self) -> int:
        return int(self.hops[0].shape[1])
