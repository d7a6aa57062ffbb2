import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclelab.graph import (
    Graph, GraphFormatError, bfs_ball, check_graph, giant_component, peel_mask,
    peel_mask_sequential, read_edge_list, two_core_of_giant, write_edge_list,
)
from cyclelab.samplers import Seed, sample_gnp


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges().tolist())
    return h


edge_lists = st.integers(1, 25).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                .filter(lambda e: e[0] != e[1]).map(lambda e: tuple(sorted(e))), max_size=60),
    )
)


def build(data):
    n, edges = data
    return Graph.from_edges(n, np.array(sorted(edges), dtype=np.int64).reshape(-1, 2))


def test_from_edges_rejects_bad_input():
    with pytest.raises(GraphFormatError):
        Graph.from_edges(3, np.array([[0, 0]]))
    with pytest.raises(GraphFormatError):
        Graph.from_edges(3, np.array([[0, 1], [1, 0]]))
    with pytest.raises(GraphFormatError):
        Graph.from_edges(3, np.array([[0, 3]]))


def test_basic_accessors():
    g = Graph.from_edges(4, np.array([[0, 1], [1, 2], [2, 0], [2, 3]]))
    assert g.vertex_count == 4 and g.edge_count == 4
    assert g.degrees.tolist() == [2, 2, 3, 1]
    assert g.neighbors(2).tolist() == [0, 1, 3]
    assert g.has_edge(3, 2) and not g.has_edge(0, 3)
    check_graph(g)


def test_edge_list_roundtrip(tmp_path):
    g = sample_gnp(200, 3.0, Seed(1))
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    lines = path.read_text().splitlines()
    assert lines[0] == f"{g.vertex_count} {g.edge_count}"
    assert read_edge_list(path) == g


@pytest.mark.parametrize("text", ["3 2\n0 1\n", "3 1\n0 0\n", "3 2\n0 1\n1 0\n", "2 1\n0 5\n"])
def test_edge_list_rejects(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(GraphFormatError):
        read_edge_list(path)


@settings(max_examples=150, deadline=None)
@given(edge_lists)
def test_two_core_matches_networkx(data):
    g = build(data)
    expected = set(nx.k_core(to_nx(g), 2).nodes())
    core = two_core_of_giant(g, scope="all")
    assert set(core.labels.tolist()) == expected
    if core.vertex_count:
        assert core.degrees.min() >= 2


@settings(max_examples=150, deadline=None)
@given(edge_lists)
def test_peel_order_independent(data):
    g = build(data)
    a = peel_mask(g)
    assert np.array_equal(a, peel_mask_sequential(g, "asc"))
    assert np.array_equal(a, peel_mask_sequential(g, "desc"))


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_giant_component_is_largest(data):
    g = build(data)
    mask = giant_component(g)
    comps = list(nx.connected_components(to_nx(g)))
    best = max(len(c) for c in comps)
    assert mask.sum() == best
    winner = min((c for c in comps if len(c) == best), key=min)
    assert set(np.flatnonzero(mask).tolist()) == winner


def test_two_core_of_giant_keeps_only_giant():
    # triangle (size 3) and a 5-cycle: the giant is the 5-cycle
    edges = [(0, 1), (1, 2), (2, 0)] + [(3 + i, 3 + (i + 1) % 5) for i in range(5)]
    core = two_core_of_giant(Graph.from_edges(8, np.array(edges)))
    assert core.labels.tolist() == [3, 4, 5, 6, 7]


def test_induced_subgraph_composes_labels():
    g = Graph.from_edges(5, np.array([[0, 1], [1, 2], [2, 3], [3, 4]]))
    h = g.induced_subgraph(np.array([1, 2, 3]))
    k = h.induced_subgraph(np.array([1, 2]))
    assert k.labels.tolist() == [2, 3] and k.edge_count == 1


def test_bfs_ball_levels():
    g = Graph.from_edges(6, np.array([[0, 1], [0, 2], [1, 3], [3, 4], [4, 5]]))
    levels, ball = bfs_ball(g, 0, 2)
    assert [lv.tolist() for lv in levels] == [[0], [1, 2], [3]]
    assert ball.vertex_count == 4
