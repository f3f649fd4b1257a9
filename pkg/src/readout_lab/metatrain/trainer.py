"""Episodic meta-training through the closed-form ridge head."""

from pathlib import Path
from typing import Dict, List, NamedTuple, Optional

import numpy as np
import pandas as pd

from readout_lab.episodes import sample_episode
from readout_lab.errors import ParameterError, TrainingAborted
from readout_lab.metatrain.encoder import EncoderParams, init_encoder
from readout_lab.metatrain.loss import loss_and_grads
from readout_lab.metatrain.optimizer import AdamW, clip_by_global_norm, cosine_lr
from readout_lab.metatrain.sources import TaskSource, build_sources
from readout_lab.models import TaskKind, TrainConfig, TrainLogEntry
from readout_lab.utils import get_logger

logger = get_logger(__name__)

LOG_COLUMNS = ["step", "task", "loss", "query_acc", "lr"]


class TrainResult(NamedTuple):
    params: EncoderParams
    log: List[TrainLogEntry]
    initial: EncoderParams


def _check_sources(config: TrainConfig, sources: Dict[TaskKind, TaskSource]) -> None:
    missing = [kind.value for kind in config.task_kinds if kind not in sources]
    if missing:
        raise ParameterError(f"No task source for configured task types: {missing}")


def _step_tasks(config: TrainConfig, rng: np.random.Generator) -> List[TaskKind]:
    kinds = config.task_kinds
    if config.episodes_per_step == 3:
        return kinds
    weights = np.array([config.task_weights[kind] for kind in kinds], dtype=np.float64)
    return [kinds[int(rng.choice(len(kinds), p=weights / weights.sum()))]]


def train(
    config: TrainConfig,
    sources: Optional[Dict[TaskKind, TaskSource]] = None,
) -> TrainResult:
    """
    Run config.steps meta-updates and return final parameters and the per-episode log.

    Each step samples one episode (or one per task type when episodes_per_step
    is 3), fits the ridge head on the support embeddings, backpropagates the
    query loss through the solve, clips the global gradient norm and applies
    AdamW at the annealed learning rate.

    Raises:
        ParameterError: a configured task type has no source
        TrainingAborted: the loss became non-finite
    """
    sources = build_sources(config) if sources is None else sources
    _check_sources(config, sources)

    init_seq, sample_seq, dropout_seq = np.random.SeedSequence(config.seed).spawn(3)
    first = sources[config.task_kinds[0]]
    stack = first.inputs[0] if isinstance(first.inputs, list) else first.inputs
    params = init_encoder(config.variant, stack.dim, config.d_z, config.hops, config.dropout, init_seq)
    initial = params.copy()
    sample_rng = np.random.default_rng(sample_seq)
    dropout_rng = np.random.default_rng(dropout_seq)
    optimizer = AdamW(weight_decay=config.weight_decay)
    log: List[TrainLogEntry] = []

    logger.info(
        f"Training started: steps={config.steps}, variant={config.variant.value}, "
        f"tasks={[kind.value for kind in config.task_kinds]}, seed={config.seed}"
    )
    for step in range(config.steps):
        lr = cosine_lr(step, config.steps, config.lr, config.schedule)
        tasks = _step_tasks(config, sample_rng)
        total_weight = sum(config.task_weights[kind] for kind in tasks)
        grads: Dict[str, np.ndarray] = {}

        for task in tasks:
            source = sources[task]
            K = int(sample_rng.integers(config.k_range[0], config.k_range[1] + 1))
            Q = int(sample_rng.integers(config.q_range[0], config.q_range[1] + 1))
            episode = sample_episode(
                task,
                source.data,
                K,
                Q,
                seed=int(sample_rng.integers(2**32)),
                pool=source.pool,
                max_classes=config.max_classes,
            )
            result, task_grads = loss_and_grads(
                params,
                episode,
                source.inputs,
                config.ridge_lambda,
                config.label_smoothing,
                training=True,
                rng=dropout_rng,
            )
            if not np.isfinite(result.value):
                logger.error(f"Non-finite loss: step={step}, task={task.value}")
                raise TrainingAborted(step, result.value)
            share = config.task_weights[task] / total_weight
            for name, g in task_grads.items():
                grads[name] = grads[name] + share * g if name in grads else share * g
            log.append(
                TrainLogEntry(
                    step=step, task=task, loss=result.value, query_acc=result.query_accuracy, lr=lr
                )
            )

        grads, norm = clip_by_global_norm(grads, config.clip_norm)
        params = params._replace(weights=optimizer.step(params.weights, grads, lr))

        entry = log[-1]
        message = (
            f"Step {step}: task={entry.task.value}, loss={entry.loss:.4f}, "
            f"query_acc={entry.query_acc:.3f}, lr={lr:.2e}, grad_norm={norm:.3f}"
        )
        if (step + 1) % config.log_every == 0:
            logger.info(message)
        else:
            logger.debug(message)

    logger.info(f"Training finished: steps={config.steps}, episodes={len(log)}")
    return TrainResult(params=params, log=log, initial=initial)


def log_frame(log: List[TrainLogEntry]) -> pd.DataFrame:
    """Training log as a DataFrame with columns step, task, loss, query_acc, lr."""
    rows = [{**entry.model_dump(), "task": entry.task.value} for entry in log]
    return pd.DataFrame(rows, columns=LOG_COLUMNS)


def write_train_log(log: List[TrainLogEntry], path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    log_frame(log).to_csv(path, index=False, float_format="%.10g")
    return path


def final_accuracy(log: List[TrainLogEntry], window: int = 50) -> float:
    """Mean query accuracy over the last `window` episodes."""
    if not log:
        return float("nan")
    return float(np.mean([entry.query_acc for entry in log[-window:]]))
