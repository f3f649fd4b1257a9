"""Synthetic graph sources backed by networkx stochastic block models."""

from typing import List, Optional, Sequence

import networkx as nx
import numpy as np

from readout_lab.errors import ParameterError, ValidationError
from readout_lab.graphkit.types import GraphData
from readout_lab.utils import get_logger

logger = get_logger(__name__)


def make_graph(
    n: int,
    edges,
    node_features: Optional[np.ndarray] = None,
    node_labels=None,
    graph_label: Optional[int] = None,
) -> GraphData:
    """
    Build a GraphData from raw pairs, orienting each pair as (min, max) and sorting.

    Raises:
        ValidationError: self-loops, duplicates or out-of-range endpoints
    """
    if n < 1:
        raise ValidationError(f"Graph needs at least one node, got n={n}")
    pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
        raise ValidationError(f"Edge endpoint out of range for n={n}")
    if np.any(pairs[:, 0] == pairs[:, 1]):
        raise ValidationError("Self-loops are not allowed")
    pairs = np.sort(pairs, axis=1)
    if pairs.shape[0]:
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        pairs = pairs[order]
        if np.any(np.all(pairs[1:] == pairs[:-1], axis=1)):
            raise ValidationError("Duplicate edges are not allowed")

    if node_features is not None:
        node_features = np.asarray(node_features, dtype=np.float64)
        if node_features.ndim != 2 or node_features.shape[0] != n:
            raise ValidationError(f"node_features must have {n} rows, got shape={node_features.shape}")
    if node_labels is not None:
        node_labels = np.asarray(node_labels, dtype=np.int64).reshape(-1)
        if node_labels.size != n:
            raise ValidationError(f"node_labels must have {n} entries, got {node_labels.size}")
    return GraphData(
        n=n,
        edges=pairs,
        node_features=node_features,
        node_labels=node_labels,
        graph_label=graph_label,
    )


def generate_sbm(
    n: int,
    block_sizes: Sequence[int],
    p_in: float,
    p_out: float,
    seed: int = 0,
    node_features: Optional[np.ndarray] = None,
    graph_label: Optional[int] = None,
) -> GraphData:
    """
    Sample a stochastic block model; node labels are block ids.

    Intra-block pairs connect with probability p_in and inter-block pairs with
    p_out, independently. The same (arguments, seed) always yields the same edges.
    """
    block_sizes = [int(size) for size in block_sizes]
    if sum(block_sizes) != n or any(size < 1 for size in block_sizes):
        raise ParameterError(f"block_sizes must be positive and sum to n={n}, got {block_sizes}")
    if not 0.0 <= p_out <= p_in <= 1.0:
        raise ParameterError(f"Need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")

    blocks = len(block_sizes)
    probabilities = np.full((blocks, blocks), float(p_out))
    np.fill_diagonal(probabilities, float(p_in))
    graph = nx.stochastic_block_model(block_sizes, probabilities.tolist(), seed=int(seed))
    labels = np.repeat(np.arange(blocks), block_sizes)
    return make_graph(
        n,
        list(graph.edges()),
        node_features=node_features,
        node_labels=labels,
        graph_label=graph_label,
    )


def generate_graph_collection(
    graphs_per_class: int,
    n_classes: int,
    nodes_per_graph: int = 24,
    p_in: float = 0.4,
    p_out: float = 0.03,
    seed: int = 0,
) -> List[GraphData]:
    """
    Labelled graphs for graph classification: class c graphs are SBMs with c + 1 blocks.

    Graphs are returned class-major and each carries its graph_label.
    """
    if graphs_per_class < 1 or n_classes < 2:
        raise ParameterError(
            f"Need graphs_per_class >= 1 and n_classes >= 2, got {graphs_per_class}, {n_classes}"
        )
    if nodes_per_graph < n_classes:
        raise ParameterError(f"nodes_per_graph must be at least n_classes={n_classes}")

    seeds = np.random.SeedSequence(seed).generate_state(graphs_per_class * n_classes)
    collection = []
    for c in range(n_classes):
        blocks = c + 1
        sizes = [nodes_per_graph // blocks] * blocks
        for i in range(nodes_per_graph % blocks):
            sizes[i] += 1
        for g in range(graphs_per_class):
            graph_seed = int(seeds[c * graphs_per_class + g])
            collection.append(generate_sbm(nodes_per_graph, sizes, p_in, p_out, graph_seed, graph_label=c))
    logger.debug(f"Graph collection generated: classes={n_classes}, per_class={graphs_per_class}")
    return collection
