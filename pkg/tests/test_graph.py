import io

import numpy as np
import pytest

from specmix import (
    EdgeListParseError,
    Graph,
    ValidationError,
    default_tau,
    degrees,
    largest_component,
    load_edge_list,
    regularized_laplacian,
)
from specmix.graph import DegreeVector

from conftest import random_graph


def _naive_laplacian(adj: np.ndarray, tau: float) -> np.ndarray:
    """Independent double-loop oracle for the regularized Laplacian."""
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = adj[i, j] / np.sqrt((deg[i] + tau) * (deg[j] + tau))
    return out


# ---------------------------------------------------------------- parsing


def test_load_edge_list_skips_comments_and_dedupes():
    text = "# comment\n% another\n\n0 1\n1 2\n2   1\n1 0\n"
    g = load_edge_list(io.StringIO(text))
    assert g.n == 3
    assert g.edges.tolist() == [[0, 1], [1, 2]]
    assert g.node_labels().tolist() == [0, 1, 2]


def test_load_edge_list_one_based_shifts_and_keeps_labels():
    g = load_edge_list(io.StringIO("1 2\n2 3\n"), indexing="one-based")
    assert g.n == 3
    assert g.edges.tolist() == [[0, 1], [1, 2]]
    assert g.node_labels().tolist() == [1, 2, 3]


def test_load_edge_list_num_nodes_adds_isolated_tail():
    g = load_edge_list(io.StringIO("0 1\n"), num_nodes=4)
    assert g.n == 4
    assert degrees(g).values.tolist() == [1, 1, 0, 0]


def test_load_edge_list_from_path(tmp_path):
    path = tmp_path / "net.txt"
    path.write_text("0 1\n1 2\n")
    assert load_edge_list(path).m == 2


def test_load_edge_list_parse_errors_carry_line_numbers():
    with pytest.raises(EdgeListParseError, match="line 2"):
        load_edge_list(io.StringIO("0 1\n0 1 2\n"))
    with pytest.raises(EdgeListParseError, match="line 1"):
        load_edge_list(io.StringIO("a b\n"))
    with pytest.raises(EdgeListParseError, match="self loop"):
        load_edge_list(io.StringIO("0 1\n3 3\n"))
    with pytest.raises(EdgeListParseError, match="line 1"):
        load_edge_list(io.StringIO("0 1\n"), indexing="one-based")


def test_load_edge_list_rejects_empty_and_bad_overrides():
    with pytest.raises(ValidationError):
        load_edge_list(io.StringIO("# nothing\n"))
    with pytest.raises(ValidationError):
        load_edge_list(io.StringIO("0 5\n"), num_nodes=3)
    with pytest.raises(ValidationError):
        load_edge_list(io.StringIO("0 1\n"), indexing="two-based")


# ---------------------------------------------------------------- graph type


def test_graph_canonicalizes_edges():
    g = Graph(n=4, edges=np.array([[3, 1], [0, 2], [1, 3]]))
    assert g.edges.tolist() == [[0, 2], [1, 3]]
    assert g.m == 2
    assert not g.edges.flags.writeable


def test_graph_validation():
    with pytest.raises(ValidationError):
        Graph(n=2, edges=np.array([[0, 0]]))
    with pytest.raises(ValidationError):
        Graph(n=2, edges=np.array([[0, 5]]))
    with pytest.raises(ValidationError):
        Graph(n=0, edges=np.empty((0, 2), dtype=np.int64))


def test_adjacency_is_symmetric_binary():
    g = Graph(n=3, edges=np.array([[0, 1], [1, 2]]))
    a = g.adjacency()
    assert np.array_equal(a, a.T)
    assert np.array_equal(np.unique(a), [0.0, 1.0])
    assert np.all(np.diag(a) == 0)


# ---------------------------------------------------------------- degrees, tau


def test_degrees_path_graph():
    g = Graph(n=3, edges=np.array([[0, 1], [1, 2]]))
    deg = degrees(g)
    assert deg.values.tolist() == [1, 2, 1]
    assert (deg.d_max, deg.d_min) == (2, 1)


def test_default_tau_examples():
    assert default_tau(DegreeVector(values=np.array([4, 2]), d_max=4, d_min=2)) == pytest.approx(0.3)
    assert default_tau(DegreeVector(values=np.array([10, 1]), d_max=10, d_min=1)) == pytest.approx(0.55)


def test_regularized_laplacian_path_tau_zero():
    g = Graph(n=3, edges=np.array([[0, 1], [1, 2]]))
    lap = regularized_laplacian(g, tau=0.0)
    assert lap.tau == 0.0
    assert lap.matrix[0, 1] == pytest.approx(1.0 / np.sqrt(2.0))
    assert lap.matrix[0, 2] == 0.0
    assert np.array_equal(lap.matrix, lap.matrix.T)
    assert np.all(np.diag(lap.matrix) == 0)


def test_regularized_laplacian_default_tau():
    g = Graph(n=3, edges=np.array([[0, 1], [1, 2]]))
    lap = regularized_laplacian(g)
    assert lap.tau == pytest.approx(0.15)
    assert lap.matrix[0, 1] == pytest.approx(1.0 / np.sqrt(1.15 * 2.15))


def test_regularized_laplacian_matches_naive_oracle():
    rng = np.random.default_rng(101)
    for _ in range(30):
        n = int(rng.integers(3, 51))
        g = random_graph(rng, n, 0.2)
        tau = float(rng.choice([0.0, 0.3, 1.7]))
        if tau == 0.0 and degrees(g).d_min == 0:
            tau = 0.3
        lap = regularized_laplacian(g, tau)
        assert np.allclose(lap.matrix, _naive_laplacian(g.adjacency(), tau), atol=1e-12)


def test_regularized_laplacian_rejects_bad_tau():
    g = Graph(n=3, edges=np.array([[0, 1]]))  # node 2 isolated
    with pytest.raises(ValidationError, match="node 2"):
        regularized_laplacian(g, tau=0.0)
    with pytest.raises(ValidationError):
        regularized_laplacian(g, tau=-0.5)


# ---------------------------------------------------------------- components


def test_largest_component_extraction():
    # component {0,1,2,3} vs {4,5} vs isolated 6
    g = Graph(
        n=7,
        edges=np.array([[0, 1], [1, 2], [2, 3], [4, 5]]),
        labels=np.arange(10, 17),
    )
    sub = largest_component(g)
    assert sub.n == 4
    assert sub.edges.tolist() == [[0, 1], [1, 2], [2, 3]]
    assert sub.node_labels().tolist() == [10, 11, 12, 13]


def test_largest_component_tie_prefers_first():
    g = Graph(n=4, edges=np.array([[0, 1], [2, 3]]))
    sub = largest_component(g)
    assert sub.n == 2
    assert sub.node_labels().tolist() == [0, 1]


def test_largest_component_connected_is_identity():
    g = Graph(n=3, edges=np.array([[0, 1], [1, 2]]))
    assert largest_component(g) is g
