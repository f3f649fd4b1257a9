"""Frozen-encoder evaluation with any readout head."""

from typing import Dict, Optional

import numpy as np

from readout_lab.episodes import AssembledEpisode, assemble, sample_episode
from readout_lab.errors import ParameterError
from readout_lab.graphkit import HopStack
from readout_lab.metatrain.encoder import EncoderParams, encode_array
from readout_lab.metatrain.sources import TaskSource
from readout_lab.models import ReadoutKind, TaskKind
from readout_lab.readouts import (
    accuracy,
    fit_logistic,
    fit_prototypes,
    fit_ridge,
    logistic_logits,
    prototype_logits,
    ridge_logits,
)
from readout_lab.utils import get_logger

logger = get_logger(__name__)


def readout_logits(kind: ReadoutKind, episode: AssembledEpisode, ridge_lambda: float = 10.0) -> np.ndarray:
    """Fit the chosen head on the support rows and score the query rows."""
    kind = ReadoutKind(kind)
    if kind == ReadoutKind.PROTOTYPE:
        return prototype_logits(fit_prototypes(episode.Z_s, episode.Y_s), episode.Z_q)
    if kind == ReadoutKind.RIDGE:
        return ridge_logits(fit_ridge(episode.Z_s, episode.Y_s, ridge_lambda), episode.Z_q)
    if kind == ReadoutKind.LOGISTIC:
        return logistic_logits(fit_logistic(episode.Z_s, episode.Y_s, 1e-3, max_iters=500), episode.Z_q)
    raise ParameterError(f"Unknown readout: {kind}")


def _embed(params: Optional[EncoderParams], stack: HopStack) -> np.ndarray:
    return stack.hops[0] if params is None else encode_array(params, stack)


def evaluate(
    params: Optional[EncoderParams],
    sources: Dict[TaskKind, TaskSource],
    readout: ReadoutKind = ReadoutKind.RIDGE,
    episodes: int = 50,
    K: int = 8,
    Q: int = 16,
    seed: int = 0,
    ridge_lambda: float = 10.0,
) -> Dict[TaskKind, float]:
    """
    Mean query accuracy per task over `episodes` evaluation episodes.

    params=None evaluates the frozen aligned features (hop 0) directly. Episodes
    are drawn in evaluation mode from a seed sequence, so two calls with the
    same seed see identical episodes whatever the encoder.
    """
    if episodes < 1:
        raise ParameterError(f"episodes must be positive, got {episodes}")
    results: Dict[TaskKind, float] = {}
    for task, source in sources.items():
        if task == TaskKind.GRAPH:
            embeddings = [_embed(params, stack) for stack in source.inputs]
        else:
            embeddings = _embed(params, source.inputs)
        seeds = np.random.SeedSequence([seed, list(TaskKind).index(task)]).generate_state(episodes)
        scores = []
        for episode_seed in seeds:
            episode = sample_episode(
                task, source.data, K, Q, seed=int(episode_seed), pool=source.pool, mode="eval"
            )
            assembled = assemble(episode, embeddings)
            logits = readout_logits(readout, assembled, ridge_lambda)
            scores.append(accuracy(logits, episode.query_labels))
        results[task] = float(np.mean(scores))
        logger.debug(
            f"Evaluation: task={task.value}, readout={ReadoutKind(readout).value}, acc={results[task]:.4f}"
        )
    return results
