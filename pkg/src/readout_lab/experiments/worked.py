"""Hand-checkable examples with exactly known answers."""

from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from readout_lab.experiments.runner import write_frame
from readout_lab.experiments.types import CheckResult
from readout_lab.geometry import eps_inclusion_margin, flag_interior, hull_distance
from readout_lab.readouts import (
    accuracy,
    fit_logistic,
    fit_prototypes,
    fit_ridge,
    knn_predict,
    logistic_logits,
    one_hot,
    predict,
    prototype_logits,
    ridge_logits,
)

EXACT_TOL = 1e-9
RIDGE_LAMBDA = 0.01

LINE_Z = np.array([[-1.0], [0.0], [1.0], [2.0]])
LINE_Y = np.array([0, 0, 1, 1])
LINE_SHIFT = 5.0

PLANE_Z = np.array(
    [
        [-3.0, 1.0], [-3.0, -1.0], [3.0, 1.0], [3.0, -1.0],
        [-2.0, 0.0], [-1.0, 0.0],
        [1.0, 0.0], [2.0, 0.0],
    ]
)
PLANE_Y = np.array([0, 0, 0, 0, 1, 1, 2, 2])


def _check(name: str, expected, actual, tol: float = EXACT_TOL) -> CheckResult:
    expected_arr = np.asarray(expected, dtype=np.float64)
    actual_arr = np.asarray(actual, dtype=np.float64)
    passed = expected_arr.shape == actual_arr.shape and bool(np.all(np.abs(expected_arr - actual_arr) <= tol))
    return CheckResult(name, passed, np.round(expected_arr, 12).tolist(), np.round(actual_arr, 12).tolist())


def translation_checks() -> List[CheckResult]:
    """Four 1-D points: prototype accuracy 1.0 before and 0.5 after a shift by 5."""
    Y = one_hot(LINE_Y, 2)
    shifted = LINE_Z + LINE_SHIFT
    before = fit_prototypes(LINE_Z, Y)
    after = fit_prototypes(shifted, Y)
    ridge_after = fit_ridge(shifted, Y, RIDGE_LAMBDA)
    slope = ridge_after.W[0, 1] - ridge_after.W[0, 0]
    boundary = -(ridge_after.b[1] - ridge_after.b[0]) / slope

    return [
        _check("line.prototypes", [-0.5, 1.5], before.prototypes[:, 0]),
        _check("line.logits_at_-1", [0.5, -1.5], prototype_logits(before, [[-1.0]])[0]),
        _check("line.proto_acc", 1.0, accuracy(prototype_logits(before, LINE_Z), LINE_Y)),
        _check("line.shifted_prototypes", [4.5, 6.5], after.prototypes[:, 0]),
        _check("line.prototype_gap", 2.0, after.prototypes[1, 0] - after.prototypes[0, 0]),
        _check("line.shifted_proto_acc", 0.5, accuracy(prototype_logits(after, shifted), LINE_Y)),
        _check(
            "line.ridge_acc",
            1.0,
            accuracy(ridge_logits(fit_ridge(LINE_Z, Y, RIDGE_LAMBDA), LINE_Z), LINE_Y),
        ),
        _check("line.shifted_ridge_acc", 1.0, accuracy(ridge_logits(ridge_after, shifted), LINE_Y)),
        _check("line.shifted_ridge_boundary", 5.5, boundary, tol=0.05),
        _check("line.shifted_knn_acc", 1.0, np.mean(knn_predict(shifted, LINE_Y, shifted) == LINE_Y)),
    ]


def inclusion_checks() -> List[CheckResult]:
    """Three 2-D classes where the four-mode class A averages to the B-C midpoint."""
    Y = one_hot(PLANE_Y, 3)
    model = fit_prototypes(PLANE_Z, Y)
    solution = hull_distance(model.prototypes, 0)
    predictions = predict(prototype_logits(model, PLANE_Z))
    lifted = np.column_stack([PLANE_Z[:, 0], PLANE_Z[:, 1] ** 2])
    lifted_model = fit_logistic(lifted, Y, 1e-3, max_iters=5000)
    report = flag_interior(model.prototypes)

    return [
        _check("plane.prototypes", [[0.0, 0.0], [-1.5, 0.0], [1.5, 0.0]], model.prototypes),
        _check("plane.hull_weights_a", [0.5, 0.5], solution.weights, tol=1e-7),
        _check("plane.d_ch_a", 0.0, solution.distance, tol=1e-7),
        _check("plane.predicts_a", 0, int(np.sum(predictions == 0))),
        _check("plane.proto_acc", 0.5, np.mean(predictions == PLANE_Y)),
        _check("plane.lifted_linear_acc", 1.0, accuracy(logistic_logits(lifted_model, lifted), PLANE_Y)),
        _check("plane.margin_a", 0.0, max(0.0, eps_inclusion_margin(model.prototypes, 0, R=4.0)), tol=EXACT_TOL),
        _check("plane.flagged", [0], report.flagged),
    ]


def run_worked_examples() -> List[CheckResult]:
    return translation_checks() + inclusion_checks()


def checks_frame(checks: List[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"name": c.name, "passed": c.passed, "expected": str(c.expected), "actual": str(c.actual)}
            for c in checks
        ]
    )


def write_checks(checks: List[CheckResult], out_dir: Path | str, stem: str = "worked_examples") -> Path:
    return write_frame(checks_frame(checks), Path(out_dir) / f"{stem}.csv")
