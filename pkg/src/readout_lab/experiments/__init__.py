"""Synthetic experiment drivers and their artifact writers."""

from readout_lab.experiments.acceptance import (
    bimodal_acceptance,
    calibration_acceptance,
    translation_acceptance,
)
from readout_lab.experiments.bimodal import DEFAULT_DELTA_GRID, first_delta, run_bimodal_sweep
from readout_lab.experiments.calibration_suite import (
    CalibrationSuiteResult,
    CalibrationSummary,
    run_calibration_suite,
    write_calibration,
)
from readout_lab.experiments.runner import (
    aggregate,
    run_seeds,
    seed_list,
    sweep_frame,
    write_frame,
    write_json,
    write_sweep,
)
from readout_lab.experiments.translation import DEFAULT_T_GRID, run_translation_sweep
from readout_lab.experiments.types import CheckResult
from readout_lab.experiments.worked import (
    checks_frame,
    inclusion_checks,
    run_worked_examples,
    translation_checks,
    write_checks,
)

__all__ = [
    "DEFAULT_DELTA_GRID",
    "DEFAULT_T_GRID",
    "CalibrationSuiteResult",
    "CalibrationSummary",
    "CheckResult",
    "aggregate",
    "bimodal_acceptance",
    "calibration_acceptance",
    "checks_frame",
    "first_delta",
    "inclusion_checks",
    "run_bimodal_sweep",
    "run_calibration_suite",
    "run_seeds",
    "run_translation_sweep",
    "run_worked_examples",
    "seed_list",
    "sweep_frame",
    "translation_acceptance",
    "translation_checks",
    "write_calibration",
    "write_checks",
    "write_frame",
    "write_json",
    "write_sweep",
]
