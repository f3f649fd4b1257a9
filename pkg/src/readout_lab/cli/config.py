"""Command configuration models and flag/file/default merging."""

import argparse
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from readout_lab.config import settings
from readout_lab.errors import ValidationError
from readout_lab.experiments import DEFAULT_DELTA_GRID, DEFAULT_T_GRID
from readout_lab.experiments.calibration_suite import GEOMETRIES
from readout_lab.metatrain import get_preset
from readout_lab.models import TaskKind, TrainConfig

ConfigT = TypeVar("ConfigT", bound=BaseModel)


class ExperimentConfig(BaseModel):
    """Seed fan-out shared by every experiment"""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    seed: int = 0
    seeds: int = Field(20, ge=1)
    jobs: int = Field(default_factory=lambda: settings.jobs, ge=1)


class TranslationConfig(ExperimentConfig):
    n: int = Field(800, ge=4)
    d: int = Field(64, ge=1)
    margin: float = Field(6.0, ge=0.0)
    t_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_T_GRID), min_length=1)
    ridge_lambda: float = Field(default_factory=lambda: settings.ridge_lambda, gt=0.0, alias="lambda")


class BimodalConfig(ExperimentConfig):
    d: int = Field(64, ge=3)
    n_unimodal: int = Field(100, ge=2)
    n_mode: int = Field(50, ge=1)
    delta_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_DELTA_GRID), min_length=1)
    ridge_lambda: float = Field(default_factory=lambda: settings.ridge_lambda, gt=0.0, alias="lambda")


class CalibrationConfig(ExperimentConfig):
    n: int = Field(500, ge=4)
    C: int = Field(5, ge=2)
    d: int = Field(64, ge=1)
    geometries: List[str] = Field(default_factory=lambda: list(GEOMETRIES), min_length=1)
    n_bins: int = Field(default_factory=lambda: settings.n_bins, ge=1)


class WorkedConfig(BaseModel):
    """Worked examples take no parameters"""

    model_config = ConfigDict(extra="forbid", frozen=True)


class FanOut(BaseModel):
    """Independent training runs, one per seed starting at the config seed"""

    model_config = ConfigDict(frozen=True)

    seeds: int = Field(1, ge=1)
    jobs: int = Field(default_factory=lambda: settings.jobs, ge=1)


class AuditConfig(BaseModel):
    """
    Hull audit options.

    The audit is deterministic; seed, seeds and jobs are validated and
    recorded in the manifest but do not change the result.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = 0
    seeds: int = Field(1, ge=1)
    jobs: int = Field(default_factory=lambda: settings.jobs, ge=1)
    hull_tol: float = Field(default_factory=lambda: settings.hull_tol, ge=0.0)


EXPERIMENT_CONFIGS: Dict[str, Type[BaseModel]] = {
    "translation": TranslationConfig,
    "bimodal": BimodalConfig,
    "calibration": CalibrationConfig,
    "worked-examples": WorkedConfig,
}


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Read a JSON object from path; None yields an empty layer."""
    if path is None:
        return {}
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"Config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ValidationError(f"Config file is not valid JSON: {path}: {e}") from None
    if not isinstance(payload, dict):
        raise ValidationError(f"Config file must hold a JSON object: {path}")
    if "lambda" in payload:
        payload["ridge_lambda"] = payload.pop("lambda")
    return payload


def flag_layer(args: argparse.Namespace, model: Type[BaseModel]) -> Dict[str, Any]:
    """Explicitly given flags (non-None) that name a field of model."""
    return {
        key: value
        for key, value in vars(args).items()
        if value is not None and key in model.model_fields
    }


def resolve(model: Type[ConfigT], args: argparse.Namespace, base: Optional[Dict[str, Any]] = None) -> ConfigT:
    """Merge base < --config file < flags and validate the result."""
    merged = {**(base or {}), **load_config_file(getattr(args, "config", None)), **flag_layer(args, model)}
    return model.model_validate(merged)


def resolve_train_config(args: argparse.Namespace) -> Tuple[TrainConfig, FanOut]:
    """
    Preset < --config file < flags; --tasks replaces task_weights with equal weights.

    seeds and jobs, from the file or the flags, go to the fan-out instead.
    """
    file_layer = load_config_file(args.config)
    fan_out_layer = {key: file_layer.pop(key) for key in FanOut.model_fields if key in file_layer}
    flags = flag_layer(args, TrainConfig)
    if args.tasks is not None:
        flags["task_weights"] = {TaskKind(name): 1.0 for name in args.tasks}
    config = TrainConfig.model_validate({**get_preset(args.preset).model_dump(), **file_layer, **flags})
    fan_out = FanOut.model_validate({**fan_out_layer, **flag_layer(args, FanOut)})
    return config, fan_out
