"""Turn episode references into readout inputs, in numpy or on a tape."""

from typing import Mapping, Sequence, Tuple, Union

import numpy as np

from readout_lab.errors import AssemblyError
from readout_lab.episodes.types import AssembledEpisode, Episode
from readout_lab.models import TaskKind
from readout_lab.numcore import Tape, Var
from readout_lab.readouts import one_hot

GraphEmbeddings = Union[Mapping[int, np.ndarray], Sequence[np.ndarray]]


def episode_targets(episode: Episode) -> Tuple[np.ndarray, np.ndarray]:
    """One-hot support and query label matrices."""
    return one_hot(episode.support_labels, episode.C), one_hot(episode.query_labels, episode.C)


def _node_rows(Z: np.ndarray, refs: np.ndarray) -> np.ndarray:
    refs = np.asarray(refs).reshape(-1)
    missing = refs[(refs < 0) | (refs >= Z.shape[0])]
    if missing.size:
        raise AssemblyError(int(missing[0]), f"embedding matrix has {Z.shape[0]} rows")
    return Z[refs]


def _edge_rows(Z: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs).reshape(-1, 2)
    bad = (pairs < 0) | (pairs >= Z.shape[0])
    if bad.any():
        row = int(np.argmax(bad.any(axis=1)))
        raise AssemblyError(tuple(int(x) for x in pairs[row]), f"embedding matrix has {Z.shape[0]} rows")
    return Z[pairs[:, 0]] * Z[pairs[:, 1]]


def _graph_rows(embeddings: GraphEmbeddings, refs: np.ndarray) -> np.ndarray:
    rows = []
    for ref in np.asarray(refs).reshape(-1).tolist():
        try:
            Z = embeddings[ref]
        except (KeyError, IndexError):
            raise AssemblyError(ref, "no node embeddings for graph") from None
        rows.append(np.asarray(Z, dtype=np.float64).mean(axis=0))
    return np.vstack(rows)


def assemble(episode: Episode, embeddings) -> AssembledEpisode:
    """
    Build (Z_s, Y_s, Z_q, Y_q) from node embeddings.

    Node rows are z_v, edge rows are z_u * z_v (Hadamard) and graph rows are
    the mean of the graph's node embeddings. For graph episodes embeddings maps
    graph id to that graph's node embedding matrix.
    """
    Y_s, Y_q = episode_targets(episode)
    if episode.task == TaskKind.GRAPH:
        Z_s = _graph_rows(embeddings, episode.support_refs)
        Z_q = _graph_rows(embeddings, episode.query_refs)
    else:
        Z = np.asarray(embeddings, dtype=np.float64)
        rows = _edge_rows if episode.task == TaskKind.EDGE else _node_rows
        Z_s = rows(Z, episode.support_refs)
        Z_q = rows(Z, episode.query_refs)
    return AssembledEpisode(Z_s=Z_s, Y_s=Y_s, Z_q=Z_q, Y_q=Y_q)


def assemble_on_tape(
    tape: Tape,
    episode: Episode,
    Z: Var,
    graph_rows: Mapping[int, Sequence[int]] | None = None,
) -> Tuple[Var, Var]:
    """
    Differentiable support and query rows gathered from an encoded node matrix Z.

    For graph episodes Z stacks the nodes of every needed graph and graph_rows
    gives the rows of Z that belong to each graph id.
    """
    n_rows = Z.shape[0]

    def check(refs):
        flat = np.asarray(refs).reshape(-1)
        bad = flat[(flat < 0) | (flat >= n_rows)]
        if bad.size:
            raise AssemblyError(int(bad[0]), f"encoded matrix has {n_rows} rows")

    def gather(refs):
        check(refs)
        return tape.pool_rows(Z, [[int(ref)] for ref in np.asarray(refs).reshape(-1)])

    if episode.task == TaskKind.NODE:
        return gather(episode.support_refs), gather(episode.query_refs)

    if episode.task == TaskKind.EDGE:
        def hadamard_rows(pairs):
            pairs = np.asarray(pairs).reshape(-1, 2)
            return tape.hadamard(gather(pairs[:, 0]), gather(pairs[:, 1]))

        return hadamard_rows(episode.support_refs), hadamard_rows(episode.query_refs)

    if graph_rows is None:
        raise AssemblyError("graph_rows", "graph episodes need the row map of each graph")

    def pooled(refs):
        groups = []
        for ref in np.asarray(refs).reshape(-1).tolist():
            if ref not in graph_rows:
                raise AssemblyError(ref, "no node embeddings for graph")
            check(graph_rows[ref])
            groups.append(list(graph_rows[ref]))
        return tape.pool_rows(Z, groups)

    return pooled(episode.support_refs), pooled(episode.query_refs)
