from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator


class TaskKind(str, Enum):
    """Episode task families"""
    NODE = "node"
    EDGE = "edge"
    GRAPH = "graph"


class EncoderVariant(str, Enum):
    """Trainable encoder architectures"""
    MLP = "mlp"
    HOP_ATTENTION = "hop_attention"


class ReadoutKind(str, Enum):
    """Classification heads"""
    PROTOTYPE = "prototype"
    RIDGE = "ridge"
    LOGISTIC = "logistic"


# ============================================================================
# Geometry
# ============================================================================


class ClassHull(BaseModel):
    """Convex-hull distance of one class prototype to the remaining prototypes"""
    class_index: int
    d_ch: float = Field(..., ge=0.0)
    d_ch_norm: float = Field(..., ge=0.0)
    other_classes: List[int]
    weights: List[float]
    interior_flag: bool = False
    on_outer_hull: bool = False


class HullReport(BaseModel):
    """Per-class hull distances plus the 2-D projection used for flagging"""
    classes: List[ClassHull]
    mean_pairwise_distance: float
    pca_coordinates: List[Tuple[float, float]] = Field(default_factory=list)
    hull_vertices: List[int] = Field(default_factory=list)
    degenerate_hull: bool = False

    @computed_field
    @property
    def flagged(self) -> List[int]:
        return [entry.class_index for entry in self.classes if entry.interior_flag]


# ============================================================================
# Calibration
# ============================================================================


class ReliabilityBin(BaseModel):
    """One equal-width confidence bin of a reliability diagram"""
    lower: float
    upper: float
    confidence: float = Field(0.0, ge=0.0, le=1.0)
    accuracy: float = Field(0.0, ge=0.0, le=1.0)
    count: int = Field(0, ge=0)


class CalibrationReport(BaseModel):
    """Binned reliability data and scalar calibration errors"""
    n_bins: int = 15
    n_samples: int
    bins: List[ReliabilityBin]
    ece: float = Field(..., ge=0.0, le=1.0)
    mce: float = Field(0.0, ge=0.0, le=1.0)
    brier: float = Field(0.0, ge=0.0)
    accuracy: float = Field(0.0, ge=0.0, le=1.0)
    temperature: Optional[float] = None
    degenerate_temperature: bool = False


# ============================================================================
# Experiments
# ============================================================================


class SweepPoint(BaseModel):
    """Aggregated metrics for one value of the swept variable"""
    value: float
    metrics: Dict[str, float]


class SweepResult(BaseModel):
    """Mean/std metrics across seeds for every swept value"""
    variable: str
    points: List[SweepPoint]
    seeds: List[int]
    metadata: Dict[str, object] = Field(default_factory=dict)

    @property
    def values(self) -> List[float]:
        return [point.value for point in self.points]

    def series(self, metric: str) -> List[float]:
        return [point.metrics[metric] for point in self.points]


# ============================================================================
# Meta-training
# ============================================================================


class TrainConfig(BaseModel):
    """Episodic meta-training hyperparameters"""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    steps: int = Field(2_000, ge=0)
    episodes_per_step: Literal[1, 3] = 1
    ridge_lambda: float = Field(10.0, gt=0.0, alias="lambda")
    label_smoothing: float = Field(0.1, ge=0.0, lt=1.0)
    lr: float = Field(3e-4, ge=0.0)
    weight_decay: float = Field(1e-4, ge=0.0)
    clip_norm: float = Field(1.0, gt=0.0)
    schedule: Literal["cosine", "constant"] = "cosine"
    task_weights: Dict[TaskKind, float] = Field(
        default_factory=lambda: {TaskKind.NODE: 1.0, TaskKind.EDGE: 1.0, TaskKind.GRAPH: 1.0}
    )
    seed: int = 0
    variant: EncoderVariant = EncoderVariant.HOP_ATTENTION
    d_in: int = Field(16, ge=1)
    d_z: int = Field(16, ge=1)
    hops: int = Field(3, ge=0)
    dropout: float = Field(0.1, ge=0.0, lt=1.0)
    k_range: Tuple[int, int] = (8, 32)
    q_range: Tuple[int, int] = (16, 64)
    max_classes: int = Field(64, ge=2)
    source: Literal["sbm", "bimodal"] = "sbm"
    log_every: int = Field(100, ge=1)

    @field_validator("task_weights")
    @classmethod
    def _positive_weights(cls, value: Dict[TaskKind, float]) -> Dict[TaskKind, float]:
        if not value or any(weight <= 0 for weight in value.values()):
            raise ValueError("task weights must be positive")
        return value

    @model_validator(mode="after")
    def _ordered_ranges(self) -> "TrainConfig":
        for name in ("k_range", "q_range"):
            low, high = getattr(self, name)
            if low < 1 or high < low:
                raise ValueError(f"{name} must satisfy 1 <= low <= high")
        return self

    @property
    def task_kinds(self) -> List[TaskKind]:
        return [kind for kind in TaskKind if kind in self.task_weights]


class TrainLogEntry(BaseModel):
    """One row of the training log"""
    step: int
    task: TaskKind
    loss: float
    query_acc: float
    lr: float


# ============================================================================
# Command line
# ============================================================================


class RunManifest(BaseModel):
    """Everything needed to reproduce one command invocation"""
    command: str
    version: str
    config: Dict[str, object]
    seeds: List[int] = Field(default_factory=list)
    out_dir: str
    artifacts: Dict[str, str] = Field(default_factory=dict)
