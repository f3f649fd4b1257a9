"""Calibration metrics and temperature scaling."""

from readout_lab.calibration.metrics import brier_score, ece, reliability_table, validate_probabilities
from readout_lab.calibration.temperature import apply_temperature, mean_nll, temperature_fit
from readout_lab.calibration.types import TemperatureFit

__all__ = [
    "TemperatureFit",
    "apply_temperature",
    "brier_score",
    "ece",
    "mean_nll",
    "reliability_table",
    "temperature_fit",
    "validate_probabilities",
]
