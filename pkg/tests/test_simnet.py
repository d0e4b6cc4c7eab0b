import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semflow.errors import InvalidK, ZeroNorm
from semflow.simnet import (
    SimilarityGraph,
    cosine,
    knn_graph,
    min_k_connected,
    read_edgelist,
    write_edgelist,
)


def test_cosine_orthogonal():
    assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_cosine_parallel():
    assert cosine(np.array([1.0, 2.0]), np.array([2.0, 4.0])) == pytest.approx(1.0, abs=1e-12)


def test_cosine_hand_value():
    # oracle: dot([1,1],[1,0]) / (sqrt(2)*1) = 1/sqrt(2)
    assert cosine(np.array([1.0, 1.0]), np.array([1.0, 0.0])) == pytest.approx(
        1.0 / math.sqrt(2.0), abs=1e-12
    )


def test_cosine_zero_vector_raises():
    with pytest.raises(ZeroNorm):
        cosine(np.array([0.0, 0.0]), np.array([1.0, 0.0]))


def test_cosine_clamped():
    v = np.array([1e-8, 1.0, 1e8])
    assert -1.0 <= cosine(v, v) <= 1.0


def brute_force_knn_edges(mat, k):
    """Oracle: exhaustive pairwise cosine table + per-row selection."""
    n = len(mat)
    table = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                table[i, j] = cosine(mat[i], mat[j])
    pairs = set()
    for i in range(n):
        ranked = sorted((j for j in range(n) if j != i), key=lambda j: (-table[i, j], j))
        for j in ranked[:k]:
            pairs.add((min(i, j), max(i, j)))
    return pairs


def test_knn_graph_three_vectors_k1():
    mat = np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0]])
    g = knn_graph(mat, 1)
    assert {(i, j) for i, j, _ in g.edges} == brute_force_knn_edges(mat, 1) == {(0, 1), (1, 2)}


def test_knn_graph_complete_at_k_max():
    mat = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [-1.0, 0.5]])
    g = knn_graph(mat, 3)
    assert g.m == 6  # complete graph on 4 nodes


def test_knn_graph_tie_breaks_to_lower_index():
    mat = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    g = knn_graph(mat, 1)
    # node 2 is equidistant from the identical nodes 0 and 1: picks 0
    assert {(i, j) for i, j, _ in g.edges} == {(0, 1), (0, 2)}


def test_knn_graph_weights_equal_cosine():
    rng = np.random.default_rng(5)
    mat = rng.normal(size=(6, 4))
    g = knn_graph(mat, 2)
    for i, j, w in g.edges:
        assert w == cosine(mat[i], mat[j])


def test_knn_graph_invalid_k():
    mat = np.eye(3)
    with pytest.raises(InvalidK):
        knn_graph(mat, 0)
    with pytest.raises(InvalidK):
        knn_graph(mat, 3)
    with pytest.raises(InvalidK):
        knn_graph(mat[:1], 1)


def test_knn_graph_zero_vector_raises():
    mat = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ZeroNorm):
        knn_graph(mat, 1)


def test_min_k_connected_three_vectors():
    mat = np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0]])
    k_used, g = min_k_connected(mat)
    assert k_used == 1
    assert g.is_connected()


def test_min_k_connected_two_pairs_needs_k2():
    # oracle: at k=1 the graph splits into {0,1} and {2,3}
    mat = np.array([[1.0, 0.0], [0.99, 0.01], [0.0, 1.0], [0.01, 0.99]])
    g1 = knn_graph(mat, 1)
    assert {(i, j) for i, j, _ in g1.edges} == {(0, 1), (2, 3)}
    assert not g1.is_connected()
    k_used, g = min_k_connected(mat)
    assert k_used == 2
    assert g.is_connected()


def test_min_k_connected_two_nodes():
    mat = np.array([[1.0, 0.0], [0.0, 1.0]])
    k_used, g = min_k_connected(mat)
    assert k_used == 1
    assert g.m == 1


def test_min_k_graph_equals_knn_graph_at_k_used():
    rng = np.random.default_rng(11)
    mat = rng.normal(size=(20, 5))
    k_used, g = min_k_connected(mat)
    direct = knn_graph(mat, k_used)
    assert g.edges == direct.edges
    assert g.k_used == direct.k_used


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_knn_monotone_in_k(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    mat = rng.normal(size=(n, 3))
    previous = set()
    for k in range(1, n):
        edges = {(i, j) for i, j, _ in knn_graph(mat, k).edges}
        assert previous <= edges
        previous = edges


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_knn_matches_bruteforce(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    mat = rng.normal(size=(n, 3))
    k = int(rng.integers(1, n))
    got = {(i, j) for i, j, _ in knn_graph(mat, k).edges}
    assert got == brute_force_knn_edges(mat, k)


def test_degree_bound_at_k_used():
    rng = np.random.default_rng(3)
    mat = rng.normal(size=(15, 4))
    k_used, g = min_k_connected(mat)
    assert (g.degrees() >= k_used).all()


def test_edgelist_roundtrip(tmp_path):
    mat = np.random.default_rng(1).normal(size=(8, 3))
    _, g = min_k_connected(mat)
    path = tmp_path / "graph.txt"
    write_edgelist(g, path)
    g2 = read_edgelist(path)
    assert g2.n == g.n
    assert g2.k_used == g.k_used
    assert [(i, j) for i, j, _ in g2.edges] == [(i, j) for i, j, _ in g.edges]
    for (_, _, w1), (_, _, w2) in zip(g.edges, g2.edges):
        assert w2 == pytest.approx(w1, abs=1e-8)
