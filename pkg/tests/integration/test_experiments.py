import numpy as np
import pandas as pd
import pytest

from readout_lab.errors import ParameterError
from readout_lab.experiments import (
    DEFAULT_DELTA_GRID,
    bimodal_acceptance,
    calibration_acceptance,
    first_delta,
    run_bimodal_sweep,
    run_calibration_suite,
    run_translation_sweep,
    run_worked_examples,
    translation_acceptance,
    write_calibration,
    write_sweep,
)
from readout_lab.experiments.synthetic import bimodal_split, mode_offsets, prototype_matrix
from readout_lab.readouts import fit_ridge, per_class_recall, ridge_logits


def _failed(checks):
    return [(check.name, check.expected, check.actual) for check in checks if not check.passed]


def test_worked_examples_all_pass():
    """Test every hand-checkable quantity matches its exact value"""
    checks = run_worked_examples()

    assert len(checks) == 18
    assert _failed(checks) == []


def test_translation_sweep_meets_thresholds(tmp_path):
    """Test ridge stays accurate while prototype accuracy decays with the shift"""
    result = run_translation_sweep(seeds=20)

    assert _failed(translation_acceptance(result)) == []
    assert result.points[0].metrics["proto_acc_mean"] >= 0.97

    csv_path, json_path = write_sweep(result, tmp_path, "translation")
    frame = pd.read_csv(csv_path)
    assert list(frame.columns[:5]) == ["t", "proto_acc_mean", "proto_acc_std", "ridge_acc_mean", "ridge_acc_std"]
    assert frame["n_seeds"].unique().tolist() == [20]
    assert json_path.exists()


def test_translation_sweep_is_deterministic_across_jobs():
    """Test seed fan-out over processes reproduces the sequential result"""
    sequential = run_translation_sweep(n=200, d=8, t_grid=[0.0, 5.0], seeds=4, jobs=1)
    parallel = run_translation_sweep(n=200, d=8, t_grid=[0.0, 5.0], seeds=4, jobs=2)

    assert sequential.model_dump() == parallel.model_dump()


def test_bimodal_sweep_meets_thresholds(tmp_path):
    """Test the prototype head never predicts the included bimodal class"""
    result = run_bimodal_sweep(seeds=20)

    assert _failed(bimodal_acceptance(result)) == []
    assert first_delta(result, "d_ch_a_mean", 1e-7) == 3.0
    d_ch = np.asarray(result.series("d_ch_a_mean"))
    assert d_ch[0] > d_ch[-1]
    for point in result.points:
        metrics = point.metrics
        assert metrics["logistic_recall_a_mean"] >= 0.6, point.value
        if metrics["d_ch_a_mean"] > 1e-7:
            assert metrics["ridge_recall_a_mean"] >= 0.75, point.value
        else:
            assert metrics["proto_recall_a_mean"] <= 0.02, point.value

    csv_path, _ = write_sweep(result, tmp_path, "bimodal")
    frame = pd.read_csv(csv_path)
    assert {"delta", "d_ch_a_mean", "proto_recall_a_mean", "ridge_recall_a_mean"} <= set(frame.columns)


def test_bimodal_modes_coincide_then_straddle_the_axis():
    """Test the two modes start together off the axis and end on opposite sides of it"""
    assert mode_offsets(0.0) == (12.0, 0.0)
    height, half_gap = mode_offsets(3.0)
    assert height == 0.0
    assert half_gap == pytest.approx(12.0)
    heights = [mode_offsets(delta)[0] for delta in DEFAULT_DELTA_GRID]
    assert heights == sorted(heights, reverse=True)
    with pytest.raises(ParameterError):
        mode_offsets(-1.0)


def test_bimodal_split_at_zero_separation_is_unimodal():
    """Test both modes of the bimodal class share one center when delta is 0"""
    split = bimodal_split(0.0, np.random.default_rng(3), d=16)
    A = split.Z_s[split.y_s == 0]

    assert A.shape == (50, 16)
    # Unit-variance noise only; two modes would add the gap to the spread.
    assert np.linalg.norm(A - A.mean(axis=0), axis=1).mean() < 1.2 * np.sqrt(16)


def test_ridge_cannot_predict_a_class_on_the_segment_of_two_others():
    """Test ridge logits of an included class are the convex combination of the others"""
    split = bimodal_split(4.0, np.random.default_rng(5))
    P = prototype_matrix(split)
    logits = ridge_logits(fit_ridge(split.Z_s, split.Y_s, 10.0), split.Z_q)

    np.testing.assert_allclose(P[0], 0.5 * (P[1] + P[2]), atol=1e-10)
    np.testing.assert_allclose(logits[:, 0], 0.5 * (logits[:, 1] + logits[:, 2]), atol=1e-8)
    assert per_class_recall(logits, split.y_q, 3)[0] == 0.0


def test_calibration_suite_meets_thresholds(tmp_path):
    """Test ECE ordering prototype > temperature > logistic in both geometries"""
    result = run_calibration_suite(seeds=20)

    assert _failed(calibration_acceptance(result)) == []

    summary_path, reliability_path, _ = write_calibration(result, tmp_path)
    summary = pd.read_csv(summary_path)
    reliability = pd.read_csv(reliability_path)
    assert len(summary) == 6
    assert len(reliability) == 6 * 15
    assert {"ece_mean", "mce_mean", "brier_mean", "accuracy_mean"} <= set(summary.columns)


def test_calibration_temperature_is_fitted_per_seed():
    """Test the fitted temperature is reported and lies inside the search bracket"""
    result = run_calibration_suite(n=200, C=3, d=8, seeds=2, geometries=["varying-radius"])

    temperature = result.metric("varying-radius", "temperature", "temperature_mean")
    assert 1e-2 <= temperature <= 1e2
    assert set(result.reliability) == {
        "varying-radius/prototype",
        "varying-radius/temperature",
        "varying-radius/logistic",
    }


def test_empty_grid_is_rejected():
    """Test sweeps need at least one value"""
    with pytest.raises(ValueError):
        run_translation_sweep(t_grid=[], seeds=1)
