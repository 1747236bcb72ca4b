import numpy as np
import pytest

from softhappy import Graph, ValidationError


def test_triangle_neighbours():
    g = Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert sorted(g.neighbours(0).tolist()) == [1, 2]
    assert g.degree(0) == 2


def test_isolated_vertex_has_no_neighbours():
    g = Graph(3, [(0, 1)])
    assert g.neighbours(2).tolist() == []
    assert g.degree(2) == 0


def test_path_middle_vertex():
    g = Graph(3, [(0, 1), (1, 2)])
    assert sorted(g.neighbours(1).tolist()) == [0, 2]


def test_neighbours_out_of_range():
    g = Graph(2, [(0, 1)])
    with pytest.raises(IndexError):
        g.neighbours(2)
    with pytest.raises(IndexError):
        g.neighbours(-1)


def test_edges_canonicalized():
    g = Graph(4, [(2, 1), (3, 0)])
    assert g.edges == [(0, 3), (1, 2)]


def test_self_loop_rejected():
    with pytest.raises(ValidationError) as err:
        Graph(3, [(1, 1)])
    assert err.value.kind == "self-loop"


def test_duplicate_edge_rejected():
    with pytest.raises(ValidationError) as err:
        Graph(3, [(0, 1), (1, 0)])
    assert err.value.kind == "duplicate-edge"


def test_out_of_range_edge_rejected():
    with pytest.raises(ValidationError) as err:
        Graph(3, [(0, 3)])
    assert err.value.kind == "vertex-range"


def test_degree_sum_is_twice_edge_count():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(2, 40))
        pairs = {(int(u), int(v)) for u, v in rng.integers(0, n, size=(60, 2)) if u < v}
        g = Graph(n, sorted(pairs))
        assert int(g.degrees.sum()) == 2 * g.m


def test_adjacency_symmetry():
    g = Graph(5, [(0, 1), (1, 2), (2, 4), (0, 4)])
    for u, v in g.edges:
        assert u in g.neighbours(v).tolist()
        assert v in g.neighbours(u).tolist()


def test_equality():
    a = Graph(3, [(0, 1), (1, 2)])
    b = Graph(3, [(1, 2), (0, 1)])
    c = Graph(3, [(0, 1)])
    assert a == b
    assert a != c
    assert hash(a) == hash(b)


def test_empty_graph():
    g = Graph(0, [])
    assert g.m == 0 and g.n == 0
