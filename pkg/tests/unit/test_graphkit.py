import numpy as np
import pytest

from readout_lab.errors import ParameterError, ValidationError
from readout_lab.graphkit import (
    adjacency,
    align_features,
    generate_graph_collection,
    generate_sbm,
    hop_stack,
    make_graph,
    read_edge_list,
    sym_normalize,
    write_edge_list,
)


@pytest.fixture
def path_graph():
    """Path 0-1-2-3 plus an isolated node 4"""
    return make_graph(5, [(1, 0), (2, 1), (3, 2)], node_labels=[0, 0, 1, 1, 1])


def test_make_graph_orients_and_sorts_edges(path_graph):
    """Test edges are stored as sorted (min, max) pairs"""
    np.testing.assert_array_equal(path_graph.edges, [[0, 1], [1, 2], [2, 3]])
    assert path_graph.n_edges == 3


def test_make_graph_rejects_self_loops():
    """Test a self-loop is a validation error"""
    with pytest.raises(ValidationError):
        make_graph(3, [(1, 1)])


def test_make_graph_rejects_duplicate_edges():
    """Test both orientations of one pair count as a duplicate"""
    with pytest.raises(ValidationError):
        make_graph(3, [(0, 1), (1, 0)])


def test_make_graph_rejects_out_of_range_endpoint():
    """Test endpoints must be below n"""
    with pytest.raises(ValidationError):
        make_graph(2, [(0, 2)])


def test_sym_normalize_is_symmetric_and_keeps_isolated_nodes_zero(path_graph):
    """Test D^-1/2 A D^-1/2 entries and the isolated row"""
    A_norm = sym_normalize(path_graph)

    np.testing.assert_allclose(A_norm, A_norm.T)
    assert A_norm[0, 1] == pytest.approx(1.0 / np.sqrt(2.0))
    assert A_norm[1, 2] == pytest.approx(0.5)
    np.testing.assert_array_equal(A_norm[4], np.zeros(5))


def test_adjacency_has_no_diagonal(path_graph):
    """Test the adjacency is 0/1 and loop-free"""
    A = adjacency(path_graph)

    assert A.sum() == 2 * path_graph.n_edges
    assert np.all(np.diag(A) == 0.0)


def test_sbm_is_deterministic_per_seed():
    """Test identical arguments and seed give identical edges"""
    first = generate_sbm(30, [15, 15], 0.5, 0.05, seed=3)
    second = generate_sbm(30, [15, 15], 0.5, 0.05, seed=3)

    np.testing.assert_array_equal(first.edges, second.edges)
    np.testing.assert_array_equal(first.node_labels, np.repeat([0, 1], 15))


def test_sbm_prefers_intra_block_edges():
    """Test p_in >> p_out yields mostly intra-block edges"""
    G = generate_sbm(60, [20, 20, 20], 0.6, 0.02, seed=0)

    same_block = G.node_labels[G.edges[:, 0]] == G.node_labels[G.edges[:, 1]]
    assert same_block.mean() > 0.8


def test_sbm_rejects_bad_block_sizes():
    """Test block sizes must sum to n"""
    with pytest.raises(ParameterError):
        generate_sbm(10, [4, 4], 0.5, 0.1)


def test_sbm_rejects_inverted_probabilities():
    """Test p_out above p_in is rejected"""
    with pytest.raises(ParameterError):
        generate_sbm(10, [5, 5], 0.1, 0.5)


def test_graph_collection_is_class_major():
    """Test graphs come grouped by class with their labels"""
    collection = generate_graph_collection(graphs_per_class=3, n_classes=2, nodes_per_graph=12, seed=1)

    assert [G.graph_label for G in collection] == [0, 0, 0, 1, 1, 1]
    assert all(G.n == 12 for G in collection)
    assert np.unique(collection[-1].node_labels).size == 2


def test_align_features_has_target_width(path_graph):
    """Test featureless graphs get d_target SVD columns"""
    X0 = align_features(path_graph, d_target=3)

    assert X0.shape == (5, 3)


def test_align_features_pads_low_rank_feature_block():
    """Test a rank-1 feature block is zero-padded to its half width"""
    G = make_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], node_features=np.ones((6, 1)))

    X0 = align_features(G, d_target=4)

    assert X0.shape == (6, 4)
    np.testing.assert_array_equal(X0[:, 3], np.zeros(6))


def test_align_features_rejects_width_above_n(path_graph):
    """Test d_target cannot exceed the node count"""
    with pytest.raises(ParameterError):
        align_features(path_graph, d_target=6)


def test_hop_stack_propagates_and_freezes(path_graph):
    """Test hop k equals A_norm^k X0 and hops are read-only"""
    A_norm = sym_normalize(path_graph)
    X0 = np.random.default_rng(0).standard_normal((5, 2))

    stack = hop_stack(X0, A_norm, ell=2)

    assert stack.ell == 2
    assert (stack.n, stack.dim) == (5, 2)
    np.testing.assert_allclose(stack.hops[2], A_norm @ A_norm @ X0)
    with pytest.raises(ValueError):
        stack.hops[0][0, 0] = 1.0


def test_hop_stack_rejects_shape_mismatch():
    """Test A_norm must be n x n for the rows of X0"""
    with pytest.raises(ParameterError):
        hop_stack(np.ones((3, 2)), np.eye(4))


def test_edge_list_round_trip_with_labels(tmp_path, path_graph):
    """Test writing and reading preserves edges and labels"""
    path = write_edge_list(path_graph, tmp_path / "graph.txt")

    loaded = read_edge_list(path)

    assert loaded.n == 5
    np.testing.assert_array_equal(loaded.edges, path_graph.edges)
    np.testing.assert_array_equal(loaded.node_labels, path_graph.node_labels)


def test_read_edge_list_skips_comments(tmp_path):
    """Test comments and blank lines are ignored"""
    path = tmp_path / "graph.txt"
    path.write_text("# triangle\nn 3\n\n0 1\n1 2\n# closing edge\n2 0\n")

    G = read_edge_list(path)

    assert G.n_edges == 3
    assert G.node_labels is None


@pytest.mark.parametrize(
    "text",
    [
        "",
        "nodes 3\n0 1\n",
        "n 3\n0 x\n",
        "n 3\n0 1 2\n",
        "n 2\n0 1\nlabels\n0\n",
        "n 2\n0 0\n",
    ],
)
def test_read_edge_list_rejects_malformed_files(tmp_path, text):
    """Test grammar violations are validation errors"""
    path = tmp_path / "bad.txt"
    path.write_text(text)

    with pytest.raises(ValidationError):
        read_edge_list(path)
