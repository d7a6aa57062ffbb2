import random

import pytest

from cyclelab.oracle import _tree_paths, hamilton_forced, longest_cycle_exact, phi_exact
from cyclelab.packing import assemble_gamma_star, check_packing, phi_tree, phi_value
from cyclelab.strip import Tree, classify, strip
from cyclelab.validate import free_trees, leaf_boundary_labelings, make_tree, random_tree

SPIDER = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]


def all_uncovered_sets(tree):
    """Uncovered sets of every packing, by brute force over disjoint path families."""
    verts = set(tree.vertices.tolist())
    paths = [frozenset(p) for p in _tree_paths(tree)]
    out = set()

    def rec(i, used):
        if i == len(paths):
            out.add(frozenset(verts - used))
            return
        rec(i + 1, used)
        if not paths[i] & used:
            rec(i + 1, used | paths[i])

    rec(0, frozenset())
    return out


def lex_optimum(tree):
    sets = all_uncovered_sets(tree)
    best = min(len(s) for s in sets)
    return best, min(sorted(s) for s in sets if len(s) == best)


def test_single_vertex():
    assert phi_tree(make_tree(1, [], [0])).phi == 0
    assert phi_tree(make_tree(1, [], [])).phi == 1


def test_path_with_two_boundary_ends():
    res = phi_tree(make_tree(4, [(0, 1), (1, 2), (2, 3)], [0, 3]))
    assert res.phi == 0 and res.paths == [[0, 1, 2, 3]]


def test_spider_is_minimal_obstruction():
    t = make_tree(7, SPIDER, [2, 4, 6])
    res = phi_tree(t)
    assert res.phi == 1 == phi_exact(t)
    assert res.uncovered.tolist() == lex_optimum(t)[1] == [1]
    check_packing(t, res)


def test_small_trees_have_no_obstruction():
    for n, edges in free_trees(6):
        for bnd in leaf_boundary_labelings(n, edges):
            if n == 1 and not bnd:
                continue
            assert phi_value(make_tree(n, edges, bnd)) == 0


@pytest.mark.parametrize("max_n", [8])
def test_dp_equals_exhaustive_on_free_trees(max_n):
    for n, edges in free_trees(max_n):
        for bnd in leaf_boundary_labelings(n, edges):
            t = make_tree(n, edges, bnd)
            res = phi_tree(t)
            check_packing(t, res)
            assert res.phi == phi_exact(t) == phi_value(t)


def test_lexicographic_tie_break_against_brute_force():
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randint(1, 9)
        edges = random_tree(rng, n)
        bnd = sorted(rng.sample(range(n), rng.randint(0, n)))
        t = make_tree(n, edges, bnd)
        phi, lex = lex_optimum(t)
        res = phi_tree(t)
        assert res.phi == phi
        assert res.uncovered.tolist() == lex
        check_packing(t, res)


def test_tie_break_none_is_still_optimal():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(2, 10)
        t = make_tree(n, random_tree(rng, n), sorted(rng.sample(range(n), rng.randint(1, n))))
        res = phi_tree(t, tie_break="none")
        check_packing(t, res)
        assert res.phi == phi_exact(t)
    with pytest.raises(ValueError):
        phi_tree(t, tie_break="bogus")


def test_host_ids_are_preserved():
    t = Tree.from_edges([(10, 20), (20, 30)], [10, 30])
    res = phi_tree(t)
    assert res.paths == [[10, 20, 30]] and res.phi == 0


def test_gamma_star_on_bridged_cliques(k5_bridge_k5):
    core = k5_bridge_k5
    res = strip(core)
    trees, _ = classify(res, core)
    packs = [phi_tree(t) for t in trees]
    assert [p.paths for p in packs] == [[[0, 5, 6, 7]]]
    gs = assemble_gamma_star(core, res, packs)
    assert gs.m_star.tolist() == [[0, 7]]
    assert gs.internal.tolist() == [5, 6]
    assert gs.v2_star.tolist() == [0, 7]
    assert gs.graph.vertex_count == 10 and gs.graph.edge_count == 21
    assert gs.graph.has_edge(*gs.forced_local()[0])
    # the forced edge is a bridge, so no Hamilton cycle can use it
    assert hamilton_forced(gs.graph, gs.forced_local()) is None
    assert longest_cycle_exact(core) == 5


def test_gamma_star_rejects_bad_paths(k5_bridge_k5):
    res = strip(k5_bridge_k5)
    trees, _ = classify(res, k5_bridge_k5)
    bad = phi_tree(trees[0])
    bad.paths = [[5, 6]]
    with pytest.raises(ValueError):
        assemble_gamma_star(k5_bridge_k5, res, [bad])
