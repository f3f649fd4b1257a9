import numpy as np
import pytest

from readout_lab.errors import NotPositiveDefiniteError, ParameterError
from readout_lab.numcore import (
    Tape,
    analytic_gradients,
    as_matrix,
    cholesky_factor,
    grad_check,
    pca_project,
    solve_spd,
    truncated_svd,
)


def _spd(rng, n):
    A = rng.standard_normal((n, n))
    return A @ A.T + n * np.eye(n)


def test_solve_spd_matches_dense_solve():
    """Test Cholesky solve agrees with a dense solver"""
    rng = np.random.default_rng(0)
    K = _spd(rng, 6)
    B = rng.standard_normal((6, 3))

    X = solve_spd(K, B)

    np.testing.assert_allclose(X, np.linalg.solve(K, B), rtol=1e-10, atol=1e-12)


def test_solve_spd_leaves_inputs_untouched():
    """Test the solve does not modify K or B"""
    rng = np.random.default_rng(1)
    K = _spd(rng, 4)
    B = rng.standard_normal((4, 2))
    K_before, B_before = K.copy(), B.copy()

    solve_spd(K, B)

    np.testing.assert_array_equal(K, K_before)
    np.testing.assert_array_equal(B, B_before)


def test_cholesky_reports_failing_pivot():
    """Test a non-positive pivot is reported with its 0-based index"""
    K = np.diag([2.0, 1.0, -1.0])

    with pytest.raises(NotPositiveDefiniteError) as excinfo:
        cholesky_factor(K)

    assert excinfo.value.pivot == 2


def test_cholesky_rejects_asymmetric_matrix():
    """Test an asymmetric matrix is a parameter error"""
    with pytest.raises(ParameterError):
        cholesky_factor(np.array([[2.0, 1.0], [0.0, 2.0]]))


def test_as_matrix_rejects_non_finite_and_wrong_rank():
    """Test matrix coercion validates rank and finiteness"""
    with pytest.raises(ParameterError):
        as_matrix([1.0, 2.0])
    with pytest.raises(ParameterError):
        as_matrix([[1.0, np.nan]])


def test_truncated_svd_matches_dense_on_full_width():
    """Test randomized SVD equals the dense SVD when the sketch spans the range"""
    rng = np.random.default_rng(2)
    M = rng.standard_normal((20, 15))

    result = truncated_svd(M, 15, seed=3)
    dense = np.linalg.svd(M, compute_uv=False)

    np.testing.assert_allclose(result.S, dense, rtol=1e-6)
    np.testing.assert_allclose(result.U @ np.diag(result.S) @ result.V.T, M, atol=1e-8)


def test_truncated_svd_recovers_low_rank_matrix():
    """Test a rank-k matrix is reconstructed from its top-k factors"""
    rng = np.random.default_rng(4)
    M = rng.standard_normal((20, 5)) @ rng.standard_normal((5, 15))

    result = truncated_svd(M, 5, seed=0)
    eigenvalues = np.sort(np.linalg.eigvalsh(M.T @ M))[::-1][:5]

    np.testing.assert_allclose(result.S**2, eigenvalues, rtol=1e-6)
    np.testing.assert_allclose(result.U.T @ result.U, np.eye(5), atol=1e-10)


def test_truncated_svd_is_deterministic_per_seed():
    """Test identical seeds give identical factors"""
    M = np.random.default_rng(5).standard_normal((12, 9))

    first = truncated_svd(M, 3, seed=7)
    second = truncated_svd(M, 3, seed=7)

    np.testing.assert_array_equal(first.U, second.U)
    np.testing.assert_array_equal(first.S, second.S)


def test_truncated_svd_rejects_rank_out_of_range():
    """Test k outside [1, min(n, m)] is rejected"""
    with pytest.raises(ParameterError):
        truncated_svd(np.ones((4, 3)), 4)


def test_pca_project_is_centered_with_ordered_variance():
    """Test PCA coordinates are centered and ordered by variance"""
    rng = np.random.default_rng(6)
    X = rng.standard_normal((50, 4)) * np.array([5.0, 3.0, 1.0, 0.5]) + 10.0

    coords = pca_project(X, 2)

    np.testing.assert_allclose(coords.mean(axis=0), 0.0, atol=1e-10)
    variances = coords.var(axis=0)
    assert variances[0] >= variances[1]


def test_tape_gradients_match_finite_differences():
    """Test every tape operation against central differences"""
    rng = np.random.default_rng(7)
    targets = np.eye(3)[[0, 1, 2, 1]]

    def program(tape, params):
        X, W, b, K_root, V = params
        hidden = tape.relu(tape.add(tape.matmul(X, W), b))
        gram = tape.add(tape.matmul(K_root, K_root, trans_b=True), tape.constant(4.0 * np.eye(4)))
        solved = tape.solve_spd(gram, hidden)
        pooled = tape.pool_rows(tape.append_ones(solved), [[0, 1], [2], [3, 0]])
        logits = tape.scale(tape.matmul(pooled, V, trans_b=True), 0.5)
        logits = tape.hadamard(logits, tape.constant(np.array([[1.0, 2.0, 0.5]] * 3)))
        return tape.softmax_cross_entropy(logits, targets[:3], smoothing=0.1)

    params = [
        rng.standard_normal((4, 3)),
        rng.standard_normal((3, 3)),
        rng.standard_normal((1, 3)),
        rng.standard_normal((4, 4)),
        rng.standard_normal((3, 4)),
    ]

    assert grad_check(program, params) <= 1e-6


def test_hop_attention_gradients_match_finite_differences():
    """Test hop attention backward against central differences"""
    rng = np.random.default_rng(8)

    def program(tape, params):
        query, *hops = params
        out = tape.hop_attention(query, hops)
        return tape.softmax_cross_entropy(out, np.eye(3)[[0, 2, 1, 0, 2]])

    params = [rng.standard_normal((5, 3)) for _ in range(4)]

    assert grad_check(program, params) <= 1e-6


def test_backward_requires_scalar_root():
    """Test backward rejects a non-scalar root"""
    tape = Tape()
    x = tape.param(np.ones((2, 2)))

    with pytest.raises(ParameterError):
        tape.backward(tape.scale(x, 2.0))


def test_operands_from_another_tape_are_rejected():
    """Test mixing tapes is a parameter error"""
    a = Tape().param(np.ones((2, 2)))
    b = Tape().param(np.ones((2, 2)))

    with pytest.raises(ParameterError):
        a.tape.matmul(a, b)


def test_unreachable_node_gets_zero_gradient():
    """Test gradients of nodes off the root's path are zero"""
    def program(tape, params):
        used, _unused = params
        return tape.softmax_cross_entropy(used, np.eye(2))

    grads = analytic_gradients(program, [np.zeros((2, 2)), np.ones((3, 1))])

    np.testing.assert_array_equal(grads[1], np.zeros((3, 1)))
