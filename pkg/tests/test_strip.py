import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclelab.graph import Graph, two_core_of_giant
from cyclelab.samplers import Seed, sample_gnp
from cyclelab.strip import NotATwoCore, classify, strip
from cyclelab.validate import structural_violations

from conftest import kn


def naive_strip(g):
    """Fixed point of both absorption rules by repeated full scans."""
    adj = g.adjacency()
    s = set()
    changed = True
    while changed:
        changed = False
        for v in range(g.vertex_count):
            outside = [w for w in adj[v] if w not in s]
            if v in s and 1 <= len(outside) <= 2 or v not in s and len(outside) <= 2:
                new = set(outside) | {v}
                if not new <= s:
                    s |= new
                    changed = True
    return s


def random_core(seed, n, c):
    return two_core_of_giant(sample_gnp(n, c, Seed(seed)))


def test_complete_graph_is_not_stripped():
    core = Graph.from_edges(4, np.array(kn(0, 4)))
    res = strip(core)
    assert not res.in_s.any() and res.components == []


def test_cycle_is_fully_absorbed(cycle5):
    res = strip(cycle5)
    assert res.in_s.all()
    trees, mass = classify(res, cycle5)
    assert trees == [] and mass == 5


def test_bridged_cliques(k5_bridge_k5):
    res = strip(k5_bridge_k5)
    assert res.s_l.tolist() == [0, 5, 6, 7]
    assert np.flatnonzero(res.v2).tolist() == [0, 7]
    assert [v.tolist() for v in res.v0] == [[5, 6]]
    trees, mass = classify(res, k5_bridge_k5)
    assert mass == 0 and len(trees) == 1
    assert trees[0].boundary.tolist() == [0, 7]
    assert sorted(map(tuple, trees[0].edges.tolist())) == [(0, 5), (5, 6), (6, 7)]


def test_bridged_k4_cascades():
    # with K4 ends, absorbing a bridge vertex drops a clique vertex to two outside neighbors
    edges = kn(0, 4) + kn(6, 4) + [(0, 4), (4, 5), (5, 6)]
    res = strip(Graph.from_edges(10, np.array(edges)))
    assert res.in_s.all()


def test_rejects_non_core():
    with pytest.raises(NotATwoCore):
        strip(Graph.from_edges(3, np.array([[0, 1], [1, 2]])))


def test_log_records_cases(k5_bridge_k5):
    res = strip(k5_bridge_k5)
    assert res.steps == len(res.step_log) > 0
    assert {case for case, _, _ in res.step_log} <= {"a", "b"}
    assert strip(k5_bridge_k5, log_cap=0).step_log == []


@pytest.mark.parametrize("seed", range(25))
def test_matches_naive_fixed_point(seed):
    core = random_core(seed, 150, 2.5 + seed % 5)
    assert set(strip(core).s_l.tolist()) == naive_strip(core)


@pytest.mark.parametrize("seed", range(10))
def test_order_policies_agree(seed):
    core = random_core(100 + seed, 400, (3.0, 5.0)[seed % 2])
    ref = strip(core, "min-id").in_s
    assert np.array_equal(ref, strip(core, "max-id").in_s)
    for s in range(5):
        assert np.array_equal(ref, strip(core, "random", seed=Seed(seed, s)).in_s)


@pytest.mark.parametrize("seed", range(10))
def test_structural_invariants(seed):
    core = random_core(200 + seed, 500, (3.0, 5.0, 10.0)[seed % 3])
    res = strip(core)
    assert structural_violations(core, res) == (0, 0, 0)
    # V1, V2 and the trapped sets partition the core
    v0 = np.zeros(core.vertex_count, dtype=bool)
    for part in res.v0:
        v0[part] = True
    assert np.array_equal(res.v1 ^ res.v2 ^ v0, np.ones(core.vertex_count, dtype=bool))


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 14), st.data())
def test_random_small_cores_vs_naive(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, min_size=n, max_size=3 * n))
    g = Graph.from_edges(n, np.array(chosen))
    core = two_core_of_giant(g)
    if core.vertex_count == 0:
        return
    assert set(strip(core).s_l.tolist()) == naive_strip(core)
    assert set(strip(core, "max-id").s_l.tolist()) == naive_strip(core)


def test_summary_counts(k5_bridge_k5):
    summ = strip(k5_bridge_k5).summary()
    assert summ == {"S_L": 4, "V1": 8, "V2": 2, "trees": 1,
                    "tree_size_histogram": {"4": 1}, "non_tree_mass": 0}
