"""Fixed pools of non-edge pairs for link-prediction episodes."""

from typing import Optional

import numpy as np

from readout_lab.errors import ParameterError, SamplingError
from readout_lab.graphkit import GraphData, adjacency
from readout_lab.utils import get_logger

logger = get_logger(__name__)

POOL_FACTOR = 10


class NegativePool:
    """
    Uniformly sampled non-edges of one graph, drawn once and reused by every episode.

    Pairs are stored as (u, v) with u < v and are guaranteed absent from the edge set.
    """

    def __init__(self, graph: GraphData, pairs: np.ndarray):
        self.graph = graph
        self.pairs = pairs

    def __len__(self) -> int:
        return int(self.pairs.shape[0])

    @classmethod
    def build(cls, graph: GraphData, episode_need: int, seed=0, factor: int = POOL_FACTOR) -> "NegativePool":
        """Sample min(factor * episode_need, #non-edges) distinct non-edges."""
        if episode_need < 1:
            raise ParameterError(f"episode_need must be positive, got {episode_need}")
        n = graph.n
        total_pairs = n * (n - 1) // 2
        n_non_edges = total_pairs - graph.n_edges
        if n_non_edges < episode_need:
            raise SamplingError(
                f"Not enough non-edges for negatives: need={episode_need}, available={n_non_edges}"
            )
        size = min(factor * episode_need, n_non_edges)
        rng = np.random.default_rng(seed)

        if size * 2 >= n_non_edges:
            upper = np.triu(adjacency(graph) == 0.0, k=1)
            candidates = np.argwhere(upper)
            pairs = candidates[np.sort(rng.choice(len(candidates), size=size, replace=False))]
        else:
            existing = set(map(tuple, graph.edges.tolist()))
            chosen: set = set()
            while len(chosen) < size:
                draws = rng.integers(0, n, size=(2 * (size - len(chosen)), 2))
                for u, v in draws.tolist():
                    if u == v:
                        continue
                    pair = (min(u, v), max(u, v))
                    if pair not in existing and pair not in chosen:
                        chosen.add(pair)
                        if len(chosen) == size:
                            break
            pairs = np.array(sorted(chosen), dtype=np.int64)
        logger.debug(f"Negative pool built: n={n}, size={size}, non_edges={n_non_edges}")
        return cls(graph, pairs.astype(np.int64))

    def draw(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """count distinct pairs from the pool, uniformly without replacement."""
        if count > len(self):
            raise SamplingError(f"Negative pool too small: need={count}, pool={len(self)}")
        return self.pairs[rng.choice(len(self), size=count, replace=False)]


def ensure_pool(graph: GraphData, need: int, seed, pool: Optional[NegativePool]) -> NegativePool:
    if pool is None:
        return NegativePool.build(graph, need, seed)
    if pool.graph is not graph:
        raise ParameterError("Negative pool was built for a different graph")
    return pool
