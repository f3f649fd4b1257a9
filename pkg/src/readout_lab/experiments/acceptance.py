"""Pass/fail thresholds on aggregated experiment results."""

from typing import List

import numpy as np
from scipy.stats import spearmanr

from readout_lab.experiments.bimodal import first_delta
from readout_lab.experiments.calibration_suite import CalibrationSuiteResult
from readout_lab.experiments.types import CheckResult
from readout_lab.models import SweepResult

INCLUDED_TOL = 1e-7


def _at_most(name: str, bound: float, actual: float) -> CheckResult:
    return CheckResult(name, bool(actual <= bound), f"<= {bound}", float(actual))


def _at_least(name: str, bound: float, actual: float) -> CheckResult:
    return CheckResult(name, bool(actual >= bound), f">= {bound}", float(actual))


def translation_acceptance(result: SweepResult) -> List[CheckResult]:
    """Ridge stays accurate at every shift; prototype accuracy falls monotonically to chance."""
    t = np.array(result.values)
    proto = np.asarray(result.series("proto_acc_mean"))
    ridge = np.asarray(result.series("ridge_acc_mean"))
    rho = float(spearmanr(t, proto)[0]) if len(t) > 1 else float("nan")
    return [
        _at_least("translation.ridge_acc_min", 0.97, float(np.min(ridge))),
        _at_most("translation.proto_acc_last", 0.60, float(proto[-1])),
        CheckResult("translation.proto_spearman", bool(rho <= -0.9), "<= -0.9", rho),
    ]


def bimodal_acceptance(result: SweepResult) -> List[CheckResult]:
    """
    In the included regime the prototype head never predicts A and plateaus near 2/3.

    Ridge recall of A is bounded at every delta where the A support prototype
    is off the B-C segment. On the segment, with equal class counts, the ridge
    weights of A are the same convex combination of the B and C weights, so
    ridge cannot predict A there either; the logistic head is bounded at every
    delta instead.
    """
    d_ch = np.asarray(result.series("d_ch_a_mean"))
    included = d_ch <= INCLUDED_TOL
    checks = [CheckResult("bimodal.has_included_regime", bool(included.any()), True, bool(included.any()))]
    if included.any():
        recall = np.asarray(result.series("proto_recall_a_mean"))[included]
        acc = np.asarray(result.series("proto_acc_mean"))[included]
        checks.append(_at_most("bimodal.proto_recall_a_included_max", 0.02, float(recall.max())))
        checks.append(_at_least("bimodal.proto_acc_included_min", 0.60, float(acc.min())))
        checks.append(_at_most("bimodal.proto_acc_included_max", 0.72, float(acc.max())))
    ridge_recall = np.asarray(result.series("ridge_recall_a_mean"))
    if (~included).any():
        checks.append(
            _at_least("bimodal.ridge_recall_a_off_hull_min", 0.75, float(ridge_recall[~included].min()))
        )
    logistic_recall = np.asarray(result.series("logistic_recall_a_mean"))
    checks.append(_at_least("bimodal.logistic_recall_a_min", 0.60, float(logistic_recall.min())))
    onset_recall = first_delta(result, "proto_recall_a_mean", 0.02)
    onset_hull = first_delta(result, "d_ch_a_mean", INCLUDED_TOL)
    checks.append(
        CheckResult("bimodal.collapse_onset", onset_recall == onset_hull, onset_hull, onset_recall)
    )
    return checks


def calibration_acceptance(result: CalibrationSuiteResult) -> List[CheckResult]:
    """Strict ECE ordering prototype > temperature > logistic, plus per-geometry bands."""
    checks = []
    geometries = sorted({row.geometry for row in result.rows})
    for geometry in geometries:
        proto = result.metric(geometry, "prototype")
        temp = result.metric(geometry, "temperature")
        logistic = result.metric(geometry, "logistic")
        ordered = proto > temp > logistic
        checks.append(
            CheckResult(
                f"calibration.{geometry}.ordering",
                bool(ordered),
                "prototype > temperature > logistic",
                [proto, temp, logistic],
            )
        )
    if "origin-shifted" in geometries:
        checks.append(_at_least("calibration.origin-shifted.prototype_ece", 0.30,
                                result.metric("origin-shifted", "prototype")))
        checks.append(_at_most("calibration.origin-shifted.logistic_ece", 0.12,
                               result.metric("origin-shifted", "logistic")))
    if "varying-radius" in geometries:
        checks.append(_at_most("calibration.varying-radius.logistic_ece", 0.05,
                               result.metric("varying-radius", "logistic")))
    return checks
