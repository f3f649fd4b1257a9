from pathlib import Path

import pytest

from readout_lab.config import Settings
from readout_lab.errors import (
    AssemblyError,
    ConvergenceError,
    InsufficientClassesError,
    NotPositiveDefiniteError,
    ParameterError,
    ReadoutLabError,
    SamplingError,
    TrainingAborted,
)
from readout_lab.utils import get_logger


def test_settings_defaults():
    """Test the documented default settings"""
    settings = Settings(_env_file=None)

    assert settings.out == Path("runs")
    assert settings.ridge_lambda == 10.0
    assert settings.n_bins == 15
    assert settings.hull_tol == 1e-7
    assert settings.log_level == "INFO"


def test_settings_read_prefixed_environment(monkeypatch):
    """Test READOUT_LAB_ variables override defaults"""
    monkeypatch.setenv("READOUT_LAB_OUT", "/tmp/readout-runs")
    monkeypatch.setenv("READOUT_LAB_JOBS", "4")
    monkeypatch.setenv("READOUT_LAB_RIDGE_LAMBDA", "2.5")

    settings = Settings(_env_file=None)

    assert settings.out == Path("/tmp/readout-runs")
    assert settings.jobs == 4
    assert settings.ridge_lambda == 2.5


def test_get_logger_binds_module_name(caplog_loguru):
    """Test bound loggers emit through loguru"""
    get_logger("readout_lab.tests").warning("Sample message: value=1")

    assert "WARNING Sample message: value=1" in caplog_loguru.text


def test_error_hierarchy():
    """Test every library error derives from the common base"""
    assert issubclass(InsufficientClassesError, SamplingError)
    assert issubclass(ParameterError, ValueError)
    for error in (AssemblyError(3), ConvergenceError("Stalled", 0.5), TrainingAborted(7, float("nan"))):
        assert isinstance(error, ReadoutLabError)


def test_errors_carry_their_context():
    """Test structured attributes on raised errors"""
    with pytest.raises(NotPositiveDefiniteError) as excinfo:
        raise NotPositiveDefiniteError(4)
    assert excinfo.value.pivot == 4
    assert "index=4" in str(excinfo.value)

    aborted = TrainingAborted(12, float("inf"))
    assert (aborted.step, aborted.loss) == (12, float("inf"))
    assert "(1, 2)" in str(AssemblyError((1, 2), "missing row"))
    assert ConvergenceError("Hull solver hit the cap", 1e-3).residual == 1e-3
