"""Minimum-deficit path packings of trees and the graph they induce on the core.

For a tree ``T`` with boundary ``B`` (vertices that have a neighbor outside
``T``), a packing is a set of vertex-disjoint paths of ``T`` whose two ends
lie in ``B``; a single boundary vertex is a path of length 0.  ``phi(T)`` is
the least number of vertices such a packing can leave uncovered.

:func:`phi_tree` solves this with a rooted-tree DP.  Each vertex ``v`` has
three states, scored by the number of covered vertices in its subtree:

``U``  ``v`` uncovered;
``C``  ``v`` covered by a path that closes inside the subtree of ``v``;
``O``  ``v`` covered by a path that continues to the parent and whose lower
       end is already a boundary vertex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NEG = float("-inf")
_ANY, _UNCOVERED, _COVERED = 0, 1, 2


@dataclass
class PackingResult:
    phi: int
    paths: list
    uncovered: np.ndarray

    def covered(self):
        return sum(len(p) for p in self.paths)


def _root(tree):
    verts = tree.vertices.tolist()
    adj = tree.adjacency()
    root = verts[0]
    order, parent = [root], {root: None}
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    children = {v: [w for w in adj[v] if parent[w] == v] for v in verts}
    return order, children


def _pick(kids, free, up, j):
    """Best total when exactly ``j`` of ``kids`` extend their path upward.

    Children whose ``free`` value is infeasible must go up.  Returns
    ``(value, chosen)`` or ``(NEG, None)``.
    """
    forced = [u for u in kids if free[u] == NEG]
    if len(forced) > j or any(up[u] == NEG for u in forced):
        return NEG, None
    rest = sorted(
        (u for u in kids if free[u] > NEG and up[u] > NEG),
        key=lambda u: (free[u] - up[u], u),
    )
    chosen = forced + rest[: j - len(forced)]
    if len(chosen) < j:
        return NEG, None
    total = sum(up[u] for u in chosen) + sum(free[u] for u in kids if u not in chosen)
    return total, chosen


def _solve(order, children, boundary, allowed):
    """Bottom-up pass.

    Returns ``(value, choice)`` dicts keyed by ``(vertex, state)`` where the
    choice lists the children joined to the vertex by a path edge.
    """
    value, choice = {}, {}
    free = {}
    for v in reversed(order):
        kids = children[v]
        up = {u: value[u, "O"] for u in kids}
        opts = {"U": [(0, 0)], "O": [], "C": [(2, 1)]}
        if v in boundary:
            opts["O"] += [(0, 1), (1, 1)]
            opts["C"] += [(0, 1), (1, 1)]
        else:
            opts["O"].append((1, 1))
        a = allowed.get(v, _ANY)
        if a == _COVERED:
            opts["U"] = []
        elif a == _UNCOVERED:
            opts["O"] = opts["C"] = []
        for state, cand in opts.items():
            best, pick = NEG, None
            for j, own in cand:
                val, chosen = _pick(kids, free, up, j)
                if val > NEG and val + own > best:
                    best, pick = val + own, chosen
            value[v, state], choice[v, state] = best, pick
        free[v] = max(value[v, "U"], value[v, "C"])
    return value, choice


def _best_cover(tree, order, children, boundary, allowed):
    value, choice = _solve(order, children, boundary, allowed)
    root = order[0]
    return max(value[root, "U"], value[root, "C"]), (value, choice)


def _reconstruct(order, children, boundary, tables):
    """Top-down pass: pick states and the tree edges used by paths."""
    value, choice = tables
    root = order[0]
    state = {root: "U" if value[root, "U"] >= value[root, "C"] else "C"}
    used = []
    for v in order:
        chosen = choice[v, state[v]] or []
        for u in children[v]:
            if u in chosen:
                state[u] = "O"
                used.append((v, u))
            else:
                state[u] = "C" if value[u, "C"] > value[u, "U"] else "U"
    return state, used


def _paths_from(state, used, order):
    adj = {v: [] for v in order}
    for a, b in used:
        adj[a].append(b)
        adj[b].append(a)
    seen, paths = set(), []
    for v in sorted(order):
        if state[v] == "U" or v in seen or len(adj[v]) > 1:
            continue
        path, prev, cur = [v], None, v
        seen.add(v)
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
            seen.add(cur)
        paths.append(path)
    return paths


def phi_value(tree):
    """``phi(T)`` only, without tie-breaking or path reconstruction."""
    boundary = set(tree.boundary.tolist())
    if len(tree) == 1:
        return 0 if boundary else 1
    order, children = _root(tree)
    best, _ = _best_cover(tree, order, children, boundary, {})
    return len(tree) - best


def phi_tree(tree, tie_break="lex"):
    """Optimal packing of ``tree``.

    With ``tie_break="lex"`` the uncovered set is the lexicographically
    smallest among all optimal packings (vertices decided in increasing id
    order, each made uncovered whenever the optimum survives it).  Paths
    list vertices in host ids, starting from the smaller end.
    """
    boundary = set(tree.boundary.tolist())
    order, children = _root(tree)
    best, tables = _best_cover(tree, order, children, boundary, {})
    n = len(tree)
    allowed = {}
    if tie_break == "lex" and 0 < n - best < n:
        for v in sorted(order):
            allowed[v] = _UNCOVERED
            trial, t = _best_cover(tree, order, children, boundary, allowed)
            if trial != best:
                allowed[v] = _COVERED
        _, tables = _best_cover(tree, order, children, boundary, allowed)
    elif tie_break not in ("lex", "none"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    state, used = _reconstruct(order, children, boundary, tables)
    paths = _paths_from(state, used, order)
    uncovered = np.array(sorted(v for v in order if state[v] == "U"), dtype=np.int64)
    return PackingResult(n - best, paths, uncovered)


def check_packing(tree, result):
    """Raise ``AssertionError`` unless ``result`` is a valid packing of ``tree``."""
    adj = tree.adjacency()
    boundary = set(tree.boundary.tolist())
    covered = set()
    for path in result.paths:
        assert path[0] in boundary and path[-1] in boundary, "path end off the boundary"
        for a, b in zip(path, path[1:]):
            assert b in adj[a], "path uses a non-edge"
        assert not covered & set(path), "paths overlap"
        assert len(set(path)) == len(path), "path repeats a vertex"
        covered |= set(path)
    unc = set(result.uncovered.tolist())
    assert unc == set(adj) - covered, "uncovered set mismatch"
    assert result.phi == len(unc)


# -- the Hamiltonicity target graph ------------------------------------------

@dataclass
class GammaStar:
    """``graph`` on ``V1 + V2*`` in core ids, with forced matching ``m_star``.

    ``graph`` is a :class:`~cyclelab.graph.Graph` whose ``labels`` are core
    ids; ``m_star`` and ``internal`` are in core ids as well.
    """

    graph: object
    m_star: np.ndarray
    internal: np.ndarray
    v2_star: np.ndarray

    def forced_local(self):
        """``m_star`` translated to the local ids of ``graph``."""
        pos = {int(x): i for i, x in enumerate(self.graph.labels.tolist())}
        return [(pos[int(a)], pos[int(b)]) for a, b in self.m_star]


def assemble_gamma_star(core, result, packings):
    """Combine the core, its strip decomposition and tree packings.

    ``packings`` maps each tree (in the order given by
    :func:`cyclelab.strip.classify`) to its :class:`PackingResult`.
    """
    from .graph import Graph

    v2 = result.v2
    internal, m_star = [], []
    for pk in packings:
        for path in pk.paths:
            if not (v2[path[0]] and v2[path[-1]]):
                raise ValueError("packing path ends outside V2")
            internal.extend(path[1:-1])
            if len(path) >= 2:
                m_star.append((path[0], path[-1]))
    internal = np.array(sorted(internal), dtype=np.int64)
    v2_star = v2.copy()
    v2_star[internal] = False
    keep = result.v1 | v2_star
    edges = core.edges()
    a, b = edges[:, 0], edges[:, 1]
    v1 = result.v1
    sel = (v1[a] & v1[b]) | (v1[a] & v2_star[b]) | (v2_star[a] & v1[b])
    local = np.full(core.vertex_count, -1, dtype=np.int64)
    ids = np.flatnonzero(keep)
    local[ids] = np.arange(len(ids))
    m_star = np.array(m_star, dtype=np.int64).reshape(-1, 2)
    all_edges = np.concatenate([edges[sel], m_star])
    g = Graph.from_edges(len(ids), local[all_edges], labels=ids, check=False)
    return GammaStar(g, m_star, internal, np.flatnonzero(v2_star))
