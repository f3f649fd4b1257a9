"""Episode loss: ridge head fit on support embeddings inside the tape."""

from typing import Dict, NamedTuple, Optional, Sequence, Union

import numpy as np

from readout_lab.episodes import Episode, assemble_on_tape, episode_targets
from readout_lab.graphkit import HopStack
from readout_lab.models import TaskKind
from readout_lab.numcore import Tape, Var
from readout_lab.readouts import ridge_logits_on_tape, ridge_weights_on_tape
from readout_lab.metatrain.encoder import EncoderParams, encode

EpisodeInputs = Union[HopStack, Sequence[HopStack]]


class EpisodeLoss(NamedTuple):
    loss: Var
    logits: Var
    Y_q: np.ndarray

    @property
    def value(self) -> float:
        return float(self.loss.value.reshape(-1)[0])

    @property
    def query_accuracy(self) -> float:
        return float(np.mean(np.argmax(self.logits.value, axis=1) == np.argmax(self.Y_q, axis=1)))


def stack_graphs(stacks: Sequence[HopStack], graph_ids) -> tuple[HopStack, Dict[int, list]]:
    """Vertically stack the hop stacks of graph_ids; returns the union and each graph's rows."""
    ids = sorted(set(int(g) for g in np.asarray(graph_ids).reshape(-1)))
    rows: Dict[int, list] = {}
    offset = 0
    for g in ids:
        rows[g] = list(range(offset, offset + stacks[g].n))
        offset += stacks[g].n
    ell = min(stacks[g].ell for g in ids)
    hops = tuple(np.vstack([stacks[g].hops[k] for g in ids]) for k in range(ell + 1))
    return HopStack(hops=hops), rows


def episode_loss(
    tape: Tape,
    params: EncoderParams,
    bound: Dict[str, Var],
    episode: Episode,
    inputs: EpisodeInputs,
    ridge_lambda: float = 10.0,
    label_smoothing: float = 0.1,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> EpisodeLoss:
    """
    Label-smoothed query cross-entropy of the closed-form ridge head.

    inputs is the graph's HopStack for node and edge episodes, or the list of
    per-graph HopStacks (indexed by graph id) for graph episodes.
    """
    Y_s, Y_q = episode_targets(episode)
    if episode.task == TaskKind.GRAPH:
        union, graph_rows = stack_graphs(
            inputs, np.concatenate([episode.support_refs, episode.query_refs])
        )
        Z = encode(tape, params, bound, union, training=training, rng=rng)
        Z_s, Z_q = assemble_on_tape(tape, episode, Z, graph_rows)
    else:
        Z = encode(tape, params, bound, inputs, training=training, rng=rng)
        Z_s, Z_q = assemble_on_tape(tape, episode, Z)

    weights = ridge_weights_on_tape(tape, Z_s, Y_s, ridge_lambda)
    logits = ridge_logits_on_tape(tape, weights, Z_q)
    loss = tape.softmax_cross_entropy(logits, Y_q, smoothing=label_smoothing)
    return EpisodeLoss(loss=loss, logits=logits, Y_q=Y_q)


def loss_and_grads(
    params: EncoderParams,
    episode: Episode,
    inputs: EpisodeInputs,
    ridge_lambda: float = 10.0,
    label_smoothing: float = 0.1,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[EpisodeLoss, Dict[str, np.ndarray]]:
    """Forward and backward pass for one episode."""
    tape = Tape()
    bound = {name: tape.param(value) for name, value in params.weights.items()}
    result = episode_loss(
        tape, params, bound, episode, inputs, ridge_lambda, label_smoothing, training, rng
    )
    if not np.isfinite(result.value):
        return result, {}
    tape.backward(result.loss)
    return result, {name: var.grad for name, var in bound.items()}
