"""Episode samplers for node, edge and graph tasks."""

from typing import Literal, Optional, Sequence

import numpy as np

from readout_lab.errors import InsufficientClassesError, ParameterError, SamplingError
from readout_lab.episodes.negatives import NegativePool, ensure_pool
from readout_lab.episodes.types import Episode
from readout_lab.graphkit import GraphData
from readout_lab.models import TaskKind
from readout_lab.utils import get_logger

logger = get_logger(__name__)

Mode = Literal["train", "eval"]


def _check_shots(K: int, Q: int) -> None:
    if K < 1 or Q < 1:
        raise ParameterError(f"K and Q must be positive, got K={K}, Q={Q}")


def _split_by_class(
    labels: np.ndarray,
    K: int,
    Q: int,
    rng: np.random.Generator,
    mode: Mode,
    max_classes: Optional[int],
    task: TaskKind,
):
    """Per-class disjoint support/query draw over item indices."""
    classes, counts = np.unique(labels, return_counts=True)
    if mode == "train":
        eligible = counts >= K + Q
    else:
        eligible = counts > Q
    excluded = classes[~eligible]
    if excluded.size:
        logger.warning(
            f"Classes excluded from episode: task={task.value}, classes={excluded.tolist()}, "
            f"K={K}, Q={Q}, mode={mode}"
        )
    chosen = classes[eligible]
    if chosen.size < 2:
        raise InsufficientClassesError(
            f"Need at least 2 classes with enough examples, got {chosen.size} (K={K}, Q={Q})"
        )
    if max_classes is not None and chosen.size > max_classes:
        chosen = np.sort(rng.choice(chosen, size=max_classes, replace=False))

    support, support_labels, query, query_labels = [], [], [], []
    for local, cls in enumerate(chosen):
        members = rng.permutation(np.flatnonzero(labels == cls))
        if mode == "train":
            picked_support = members[:K]
            picked_query = members[K:K + Q]
        else:
            picked_query = members[:Q]
            remainder = members[Q:]
            replace = remainder.size < K
            picked_support = rng.choice(remainder, size=K, replace=replace)
        support.append(picked_support)
        query.append(picked_query)
        support_labels.append(np.full(K, local))
        query_labels.append(np.full(Q, local))
    return (
        np.concatenate(support),
        np.concatenate(support_labels),
        np.concatenate(query),
        np.concatenate(query_labels),
        tuple(int(cls) for cls in chosen),
    )


def sample_node_episode(
    G: GraphData,
    K: int,
    Q: int,
    seed=0,
    mode: Mode = "train",
    max_classes: Optional[int] = None,
) -> Episode:
    """
    Draw K support and Q query nodes per class.

    Training mode samples without replacement and drops classes with fewer than
    K + Q nodes. Evaluation mode holds out Q queries first and draws supports from
    the remainder, with replacement when the remainder is smaller than K.
    """
    _check_shots(K, Q)
    if G.node_labels is None:
        raise SamplingError("Node episodes need node labels")
    rng = np.random.default_rng(seed)
    s_refs, s_labels, q_refs, q_labels, classes = _split_by_class(
        G.node_labels, K, Q, rng, mode, max_classes, TaskKind.NODE
    )
    logger.debug(f"Episode sampled: task=node, classes={len(classes)}, K={K}, Q={Q}")
    return Episode(TaskKind.NODE, s_refs, s_labels, q_refs, q_labels, classes, K, Q)


def sample_graph_episode(
    graphs: Sequence[GraphData],
    K: int,
    Q: int,
    seed=0,
    mode: Mode = "train",
    max_classes: Optional[int] = None,
) -> Episode:
    """Draw K support and Q query graphs per graph label; refs index into graphs."""
    _check_shots(K, Q)
    if any(graph.graph_label is None for graph in graphs):
        raise SamplingError("Graph episodes need a graph_label on every graph")
    labels = np.array([graph.graph_label for graph in graphs], dtype=np.int64)
    rng = np.random.default_rng(seed)
    s_refs, s_labels, q_refs, q_labels, classes = _split_by_class(
        labels, K, Q, rng, mode, max_classes, TaskKind.GRAPH
    )
    logger.debug(f"Episode sampled: task=graph, classes={len(classes)}, K={K}, Q={Q}")
    return Episode(TaskKind.GRAPH, s_refs, s_labels, q_refs, q_labels, classes, K, Q)


def sample_edge_episode(
    G: GraphData,
    K: int,
    Q: int,
    seed=0,
    pool: Optional[NegativePool] = None,
) -> Episode:
    """
    Binary link prediction: K edges and K pool non-edges in support, Q of each in query.

    Class 0 is the non-edge class, class 1 the edge class. Support and query are
    disjoint at the pair level; endpoints may repeat.
    """
    _check_shots(K, Q)
    need = K + Q
    if G.n_edges < need:
        raise SamplingError(f"Not enough edges for an episode: need={need}, edges={G.n_edges}")
    rng = np.random.default_rng(seed)
    pool = ensure_pool(G, need, rng.integers(2**32), pool)

    positives = G.edges[rng.permutation(G.n_edges)[:need]]
    negatives = pool.draw(need, rng)
    support = np.vstack([negatives[:K], positives[:K]])
    query = np.vstack([negatives[K:], positives[K:]])
    support_labels = np.repeat([0, 1], K)
    query_labels = np.repeat([0, 1], Q)
    logger.debug(f"Episode sampled: task=edge, classes=2, K={K}, Q={Q}")
    return Episode(TaskKind.EDGE, support, support_labels, query, query_labels, (0, 1), K, Q)


def sample_episode(
    task: TaskKind,
    data,
    K: int,
    Q: int,
    seed=0,
    pool: Optional[NegativePool] = None,
    mode: Mode = "train",
    max_classes: Optional[int] = None,
) -> Episode:
    """Dispatch to the sampler of the given task; data is a graph or a graph list."""
    if task == TaskKind.NODE:
        return sample_node_episode(data, K, Q, seed, mode=mode, max_classes=max_classes)
    if task == TaskKind.EDGE:
        return sample_edge_episode(data, K, Q, seed, pool=pool)
    if task == TaskKind.GRAPH:
        return sample_graph_episode(data, K, Q, seed, mode=mode, max_classes=max_classes)
    raise ParameterError(f"Unknown task kind: {task}")
