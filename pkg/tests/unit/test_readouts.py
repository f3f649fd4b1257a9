import numpy as np
import pytest

from readout_lab.errors import ParameterError
from readout_lab.numcore import Tape
from readout_lab.readouts import (
    FittedRidge,
    accuracy,
    fit_logistic,
    fit_prototypes,
    fit_ridge,
    knn_predict,
    logistic_logits,
    logistic_proba,
    one_hot,
    per_class_recall,
    predict,
    prototype_logits,
    prototype_softmax,
    ridge_logits,
    ridge_logits_on_tape,
    ridge_weights_on_tape,
    softmax,
)

LINE_Z = np.array([[-1.0], [0.0], [1.0], [2.0]])
LINE_Y = np.array([0, 0, 1, 1])


def _clusters(rng, n_per_class, d, separation):
    centers = np.zeros((2, d))
    centers[0, 0], centers[1, 0] = -separation / 2, separation / 2
    labels = np.repeat([0, 1], n_per_class)
    return centers[labels] + rng.standard_normal((labels.size, d)), labels


# ============================================================================
# Prototype head
# ============================================================================


def test_prototypes_are_class_means():
    """Test prototypes of the four-point line example"""
    model = fit_prototypes(LINE_Z, one_hot(LINE_Y, 2))

    np.testing.assert_allclose(model.prototypes[:, 0], [-0.5, 1.5])
    np.testing.assert_array_equal(model.class_counts, [2, 2])


def test_prototype_logits_are_inner_products():
    """Test logits of query -1 and perfect accuracy before any shift"""
    model = fit_prototypes(LINE_Z, one_hot(LINE_Y, 2))

    np.testing.assert_allclose(prototype_logits(model, [[-1.0]]), [[0.5, -1.5]])
    assert accuracy(prototype_logits(model, LINE_Z), LINE_Y) == 1.0


def test_prototype_accuracy_collapses_after_shift():
    """Test all shifted points predict class 1"""
    shifted = LINE_Z + 5.0
    model = fit_prototypes(shifted, one_hot(LINE_Y, 2))

    predictions = predict(prototype_logits(model, shifted))

    np.testing.assert_array_equal(predictions, [1, 1, 1, 1])
    assert accuracy(prototype_logits(model, shifted), LINE_Y) == 0.5


def test_singleton_support_prototype_equals_point():
    """Test a single support row per class is its own prototype"""
    Z = np.array([[1.0, 2.0], [3.0, -1.0]])

    model = fit_prototypes(Z, np.eye(2))

    np.testing.assert_array_equal(model.prototypes, Z)


def test_zero_query_ties_to_lowest_class():
    """Test an all-zero logit row predicts class 0"""
    model = fit_prototypes(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]), np.eye(3))

    logits = prototype_logits(model, [[0.0, 0.0]])

    np.testing.assert_array_equal(logits, [[0.0, 0.0, 0.0]])
    assert predict(logits)[0] == 0


def test_empty_class_names_the_class():
    """Test a class without support is rejected with its index"""
    Y = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])

    with pytest.raises(ParameterError, match="class=1"):
        fit_prototypes(np.ones((2, 2)), Y)


def test_prototype_logits_reject_dimension_mismatch():
    """Test a query of the wrong width is a parameter error"""
    model = fit_prototypes(LINE_Z, one_hot(LINE_Y, 2))

    with pytest.raises(ParameterError):
        prototype_logits(model, [[1.0, 2.0]])


def test_prototype_boundary_normals_survive_translation():
    """Test pairwise prototype differences and boundary signs are translation invariant"""
    rng = np.random.default_rng(0)
    for _ in range(100):
        C, d = int(rng.integers(2, 6)), int(rng.integers(1, 8))
        labels = np.concatenate([np.arange(C), rng.integers(0, C, 20)])
        Z = rng.standard_normal((labels.size, d))
        t = rng.uniform(-5.0, 5.0, d)
        points = rng.standard_normal((50, d))

        before = fit_prototypes(Z, one_hot(labels, C)).prototypes
        after = fit_prototypes(Z + t, one_hot(labels, C)).prototypes

        for i in range(C):
            for j in range(i + 1, C):
                normal_before = before[i] - before[j]
                normal_after = after[i] - after[j]
                np.testing.assert_allclose(normal_after, normal_before, atol=1e-12)
                signs_before = np.sign(points @ normal_before)
                signs_after = np.sign(points @ normal_after)
                assert np.array_equal(signs_before, signs_after)


# ============================================================================
# Softmax and shared helpers
# ============================================================================


def test_softmax_hand_values():
    """Test softmax of (ln 3, 0) is (0.75, 0.25)"""
    np.testing.assert_allclose(softmax([[np.log(3.0), 0.0]]), [[0.75, 0.25]], atol=1e-15)


def test_softmax_equal_logits_are_uniform():
    """Test equal logits give the uniform distribution"""
    np.testing.assert_allclose(softmax(np.full((2, 4), 7.0)), 0.25)


def test_softmax_is_stable_for_large_logits():
    """Test rows still sum to one with huge logits"""
    probs = softmax([[1e4, 1e4 - 1.0, -1e4]])

    assert np.all(np.isfinite(probs))
    assert abs(probs.sum() - 1.0) <= 1e-12


def test_scaling_query_sharpens_prototype_softmax():
    """Test the max probability is non-decreasing in the query scale"""
    rng = np.random.default_rng(1)
    model = fit_prototypes(rng.standard_normal((6, 3)), np.eye(3)[[0, 1, 2, 0, 1, 2]])
    z = rng.standard_normal((1, 3))

    peaks = [prototype_softmax(model, s * z).max() for s in (1.0, 1.5, 2.0, 4.0, 8.0)]

    assert all(later >= earlier - 1e-15 for earlier, later in zip(peaks, peaks[1:]))


def test_one_hot_rejects_out_of_range_labels():
    """Test labels outside [0, C) are rejected"""
    with pytest.raises(ParameterError):
        one_hot([0, 2], 2)


def test_per_class_recall_reports_nan_for_absent_class():
    """Test a class without query rows has nan recall"""
    logits = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    recall = per_class_recall(logits, [0, 0], 3)

    assert recall[0] == 0.5
    assert np.isnan(recall[1]) and np.isnan(recall[2])


# ============================================================================
# Ridge head
# ============================================================================


def test_ridge_dual_matches_primal():
    """Test the dual solve equals the primal normal equations"""
    rng = np.random.default_rng(2)
    for _ in range(1000):
        n, d, C = int(rng.integers(2, 9)), int(rng.integers(1, 7)), int(rng.integers(2, 5))
        ridge_lambda = float(10.0 ** rng.uniform(-2, 2))
        Z = rng.standard_normal((n, d))
        Y = one_hot(rng.integers(0, C, n), C)

        model = fit_ridge(Z, Y, ridge_lambda)
        Z_aug = np.hstack([Z, np.ones((n, 1))])
        primal = np.linalg.solve(Z_aug.T @ Z_aug + ridge_lambda * np.eye(d + 1), Z_aug.T @ Y)
        dual = np.vstack([model.W, model.b[None, :]])

        assert np.linalg.norm(dual - primal) <= 1e-8 * max(np.linalg.norm(primal), 1e-300)


def test_ridge_huge_lambda_shrinks_everything():
    """Test the regularized bias also shrinks to zero"""
    rng = np.random.default_rng(3)
    model = fit_ridge(rng.standard_normal((6, 4)), np.eye(3)[[0, 1, 2, 0, 1, 2]], 1e12)

    assert np.linalg.norm(model.W) + np.linalg.norm(model.b) <= 1e-6


def test_ridge_rejects_non_positive_lambda():
    """Test lambda must be positive"""
    with pytest.raises(ParameterError):
        fit_ridge(LINE_Z, one_hot(LINE_Y, 2), 0.0)


def test_ridge_absorbs_shift_into_bias():
    """Test the shifted line example keeps perfect accuracy with a boundary near 5.5"""
    shifted = LINE_Z + 5.0
    model = fit_ridge(shifted, one_hot(LINE_Y, 2), 0.01)

    boundary = -(model.b[1] - model.b[0]) / (model.W[0, 1] - model.W[0, 0])

    assert accuracy(ridge_logits(model, shifted), LINE_Y) == 1.0
    assert abs(boundary - 5.5) <= 0.05


def test_ridge_bias_only_model_predicts_class_zero():
    """Test W = 0 and b = (1, 0) predicts class 0 everywhere"""
    model = FittedRidge(W=np.zeros((3, 2)), b=np.array([1.0, 0.0]), ridge_lambda=1.0)

    predictions = predict(ridge_logits(model, np.random.default_rng(4).standard_normal((5, 3))))

    np.testing.assert_array_equal(predictions, 0)


def test_ridge_logits_match_explicit_arithmetic():
    """Test query logits equal Z_q W + 1 b^T"""
    rng = np.random.default_rng(5)
    model = fit_ridge(rng.standard_normal((8, 4)), one_hot(rng.integers(0, 3, 8), 3), 10.0)
    Z_q = rng.standard_normal((5, 4))

    np.testing.assert_allclose(ridge_logits(model, Z_q), Z_q @ model.W + model.b, atol=1e-10)


def test_ridge_translation_keeps_accuracy():
    """Test translated supports and queries keep the same query accuracy"""
    rng = np.random.default_rng(6)
    Z, labels = _clusters(rng, 40, 5, 8.0)
    order = rng.permutation(labels.size)
    s, q = order[:40], order[40:]
    t = 3.0 * rng.standard_normal(5)

    before = fit_ridge(Z[s], one_hot(labels[s], 2), 0.1)
    after = fit_ridge(Z[s] + t, one_hot(labels[s], 2), 0.1)

    assert accuracy(ridge_logits(after, Z[q] + t), labels[q]) == accuracy(
        ridge_logits(before, Z[q]), labels[q]
    )


def test_ridge_on_tape_matches_closed_form():
    """Test the differentiable ridge solve equals the numpy fit"""
    rng = np.random.default_rng(7)
    Z_s, Z_q = rng.standard_normal((9, 4)), rng.standard_normal((3, 4))
    Y_s = one_hot(rng.integers(0, 3, 9), 3)
    tape = Tape()

    weights = ridge_weights_on_tape(tape, tape.param(Z_s), Y_s, 10.0)
    logits = ridge_logits_on_tape(tape, weights, tape.constant(Z_q))
    model = fit_ridge(Z_s, Y_s, 10.0)

    np.testing.assert_allclose(weights.value[:-1], model.W, atol=1e-12)
    np.testing.assert_allclose(logits.value, ridge_logits(model, Z_q), atol=1e-12)


# ============================================================================
# Logistic head
# ============================================================================


def test_logistic_separates_separable_data():
    """Test separable 1-D data reaches perfect training accuracy"""
    Z = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    labels = np.array([0, 0, 1, 1])

    model = fit_logistic(Z, one_hot(labels, 2), 0.1)

    assert accuracy(logistic_logits(model, Z), labels) == 1.0


def test_logistic_large_lambda_follows_class_priors():
    """Test heavy regularization leaves only the prior-matching bias"""
    Z = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    labels = np.array([0, 0, 0, 1])

    model = fit_logistic(Z, one_hot(labels, 2), 50.0, max_iters=3000)
    probs = logistic_proba(model, Z)

    assert np.max(np.abs(model.W)) <= 0.02
    np.testing.assert_allclose(probs.mean(axis=0), [0.75, 0.25], atol=0.03)


def test_logistic_boundary_near_bayes_midpoint():
    """Test symmetric Gaussians give a boundary near the midpoint"""
    rng = np.random.default_rng(8)
    labels = np.repeat([0, 1], 2000)
    Z = np.where(labels == 0, -1.0, 1.0)[:, None] + rng.standard_normal((labels.size, 1))

    model = fit_logistic(Z, one_hot(labels, 2), 1e-3, max_iters=2000)
    boundary = -(model.b[1] - model.b[0]) / (model.W[0, 1] - model.W[0, 0])

    assert abs(boundary) <= 0.1


def test_logistic_bias_is_expressed_for_raw_inputs():
    """Test logits on raw inputs agree with the centered fit"""
    rng = np.random.default_rng(9)
    Z = rng.standard_normal((30, 3)) + 10.0
    labels = rng.integers(0, 3, 30)

    model = fit_logistic(Z, one_hot(labels, 3), 1e-2, max_iters=500)

    probs = logistic_proba(model, Z)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)
    assert accuracy(logistic_logits(model, Z), labels) > 1.0 / 3.0


def test_logistic_rejects_negative_lambda():
    """Test lambda must be non-negative"""
    with pytest.raises(ParameterError):
        fit_logistic(LINE_Z, one_hot(LINE_Y, 2), -1.0)


# ============================================================================
# Nearest neighbours
# ============================================================================


def test_knn_is_translation_invariant():
    """Test kNN predictions do not change under a global shift"""
    rng = np.random.default_rng(10)
    Z_s, labels = _clusters(rng, 20, 4, 3.0)
    Z_q = rng.standard_normal((15, 4))
    t = 50.0 * rng.standard_normal(4)

    np.testing.assert_array_equal(
        knn_predict(Z_s, labels, Z_q, k=3), knn_predict(Z_s + t, labels, Z_q + t, k=3)
    )


def test_knn_distance_ties_keep_lower_support_index():
    """Test duplicate supports resolve to the earlier row"""
    Z_s = np.array([[1.0], [1.0]])

    assert knn_predict(Z_s, [1, 0], [[1.0]], k=1)[0] == 1


def test_knn_rejects_k_out_of_range():
    """Test k larger than the support set is rejected"""
    with pytest.raises(ParameterError):
        knn_predict(LINE_Z, LINE_Y, LINE_Z, k=5)
