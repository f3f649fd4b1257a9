"""Encoder, episode loss, optimizer and the meta-training loop."""

from readout_lab.metatrain.checkpoint import (
    dump_checkpoint,
    dump_matrices,
    load_checkpoint,
    parse_checkpoint,
    parse_matrices,
    save_checkpoint,
)
from readout_lab.metatrain.encoder import EncoderParams, bind_params, encode, encode_array, init_encoder
from readout_lab.metatrain.evaluate import evaluate, readout_logits
from readout_lab.metatrain.loss import EpisodeLoss, episode_loss, loss_and_grads, stack_graphs
from readout_lab.metatrain.optimizer import AdamW, clip_by_global_norm, cosine_lr, global_norm
from readout_lab.metatrain.presets import PRESETS, get_preset
from readout_lab.metatrain.sources import (
    TaskSource,
    bimodal_graph,
    bimodal_sources,
    build_sources,
    prepare_graph,
    sbm_sources,
)
from readout_lab.metatrain.trainer import (
    TrainResult,
    final_accuracy,
    log_frame,
    train,
    write_train_log,
)

__all__ = [
    "AdamW",
    "EncoderParams",
    "EpisodeLoss",
    "PRESETS",
    "TaskSource",
    "TrainResult",
    "bimodal_graph",
    "bimodal_sources",
    "bind_params",
    "build_sources",
    "clip_by_global_norm",
    "cosine_lr",
    "dump_checkpoint",
    "dump_matrices",
    "encode",
    "encode_array",
    "episode_loss",
    "evaluate",
    "final_accuracy",
    "get_preset",
    "global_norm",
    "init_encoder",
    "load_checkpoint",
    "log_frame",
    "loss_and_grads",
    "parse_checkpoint",
    "parse_matrices",
    "prepare_graph",
    "readout_logits",
    "sbm_sources",
    "save_checkpoint",
    "stack_graphs",
    "train",
    "write_train_log",
]
