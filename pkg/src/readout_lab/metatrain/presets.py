"""Named training configurations."""

from typing import Dict

from readout_lab.errors import ParameterError
from readout_lab.models import EncoderVariant, TaskKind, TrainConfig

PRESETS: Dict[str, TrainConfig] = {
    "default": TrainConfig(),
    "bimodal-demo": TrainConfig(
        steps=500,
        episodes_per_step=1,
        ridge_lambda=1.0,
        lr=1e-2,
        dropout=0.0,
        variant=EncoderVariant.MLP,
        source="bimodal",
        task_weights={TaskKind.NODE: 1.0},
        d_in=8,
        d_z=16,
        hops=0,
        k_range=(5, 10),
        q_range=(10, 20),
        log_every=50,
    ),
    "full": TrainConfig(steps=10_000),
}


def get_preset(name: str) -> TrainConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ParameterError(f"Unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
