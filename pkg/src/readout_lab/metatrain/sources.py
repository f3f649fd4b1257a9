"""Synthetic task sources: graphs with their frozen hop stacks and negative pools."""

from typing import Dict, List, NamedTuple, Optional, Union

import numpy as np

from readout_lab.episodes import NegativePool
from readout_lab.graphkit import (
    GraphData,
    HopStack,
    align_features,
    generate_graph_collection,
    generate_sbm,
    hop_stack,
    make_graph,
    sym_normalize,
)
from readout_lab.models import TaskKind, TrainConfig
from readout_lab.utils import get_logger

logger = get_logger(__name__)

SBM_CLASSES = 4
SBM_P_IN = 0.1
SBM_P_OUT = 0.01
GRAPH_CLASSES = 3

# Node layout with one class split across four modes whose mean sits between the other two
BIMODAL_LAYOUT = {
    0: [(-3.0, 1.0), (-3.0, -1.0), (3.0, 1.0), (3.0, -1.0)],
    1: [(-2.0, 0.0), (-1.0, 0.0)],
    2: [(1.0, 0.0), (2.0, 0.0)],
}


class TaskSource(NamedTuple):
    """Sampling data for one task kind plus the encoder inputs built from it."""
    task: TaskKind
    data: Union[GraphData, List[GraphData]]
    inputs: Union[HopStack, List[HopStack]]
    pool: Optional[NegativePool] = None


def prepare_graph(graph: GraphData, d_in: int, hops: int, seed: int = 0) -> HopStack:
    """Normalize, align features to d_in columns and propagate for `hops` steps."""
    A_norm = sym_normalize(graph)
    X0 = align_features(graph, d_in, seed=seed, A_norm=A_norm)
    return hop_stack(X0, A_norm, hops)


def _episode_need(config: TrainConfig) -> int:
    return config.k_range[1] + config.q_range[1]


def sbm_sources(config: TrainConfig) -> Dict[TaskKind, TaskSource]:
    """SBM node/edge sources on one graph and a graph-classification collection."""
    need = _episode_need(config)
    seeds = np.random.SeedSequence([config.seed, 1]).generate_state(4)
    block = max(need + 4, config.d_in)
    sources: Dict[TaskKind, TaskSource] = {}

    if {TaskKind.NODE, TaskKind.EDGE} & set(config.task_kinds):
        graph = generate_sbm(block * SBM_CLASSES, [block] * SBM_CLASSES, SBM_P_IN, SBM_P_OUT, int(seeds[0]))
        stack = prepare_graph(graph, config.d_in, config.hops, int(seeds[1]))
        if TaskKind.NODE in config.task_kinds:
            sources[TaskKind.NODE] = TaskSource(TaskKind.NODE, graph, stack)
        if TaskKind.EDGE in config.task_kinds:
            pool = NegativePool.build(graph, need, int(seeds[2]))
            sources[TaskKind.EDGE] = TaskSource(TaskKind.EDGE, graph, stack, pool)

    if TaskKind.GRAPH in config.task_kinds:
        graphs = generate_graph_collection(
            need, GRAPH_CLASSES, nodes_per_graph=max(24, config.d_in), seed=int(seeds[3])
        )
        stacks = [prepare_graph(graph, config.d_in, config.hops, i) for i, graph in enumerate(graphs)]
        sources[TaskKind.GRAPH] = TaskSource(TaskKind.GRAPH, graphs, stacks)

    logger.info(f"Task sources ready: source=sbm, tasks={[kind.value for kind in sources]}")
    return sources


def bimodal_graph(
    nodes_per_class: int = 80,
    noise: float = 0.2,
    pad_dims: int = 2,
    seed: int = 0,
) -> GraphData:
    """
    Edgeless graph whose node features follow the bimodal three-class layout.

    Each class cycles over its layout points; every coordinate gets N(0, noise^2)
    and pad_dims pure-noise coordinates are appended.
    """
    rng = np.random.default_rng(seed)
    features, labels = [], []
    for cls, centers in BIMODAL_LAYOUT.items():
        centers = np.array(centers)
        picks = centers[np.arange(nodes_per_class) % len(centers)]
        points = np.hstack([picks, np.zeros((nodes_per_class, pad_dims))])
        features.append(points + noise * rng.standard_normal(points.shape))
        labels.append(np.full(nodes_per_class, cls))
    X = np.vstack(features)
    return make_graph(X.shape[0], [], node_features=X, node_labels=np.concatenate(labels))


def bimodal_sources(config: TrainConfig) -> Dict[TaskKind, TaskSource]:
    """Node-classification source on the bimodal layout."""
    nodes_per_class = max(80, _episode_need(config))
    graph = bimodal_graph(nodes_per_class=nodes_per_class, seed=config.seed)
    stack = prepare_graph(graph, config.d_in, config.hops, config.seed)
    logger.info(f"Task sources ready: source=bimodal, nodes={graph.n}")
    return {TaskKind.NODE: TaskSource(TaskKind.NODE, graph, stack)}


def build_sources(config: TrainConfig) -> Dict[TaskKind, TaskSource]:
    if config.source == "bimodal":
        return bimodal_sources(config)
    return sbm_sources(config)
