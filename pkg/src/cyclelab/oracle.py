"""Exact brute-force references for small instances."""
from __future__ import annotations

import itertools

MAX_CYCLE_VERTICES = 20
MAX_PHI_VERTICES = 12


class TooLarge(ValueError):
    """Instance exceeds the oracle's tractability bound."""


def _adj_masks(g):
    return [sum(1 << w for w in nb) for nb in g.adjacency()]


def longest_cycle_exact(g, max_vertices=MAX_CYCLE_VERTICES):
    """Length of the longest cycle of ``g`` (0 if acyclic).

    For each start ``s`` (the smallest vertex of the cycle) a bitmask DP
    tracks, per visited set, the set of possible path ends; only vertices
    above ``s`` may be visited.
    """
    n = g.vertex_count
    if n > max_vertices:
        raise TooLarge(f"{n} vertices > {max_vertices}")
    adj = _adj_masks(g)
    best = 0
    for s in range(n):
        higher = ~((1 << (s + 1)) - 1)
        layer = {1 << s: 1 << s}
        size = 1
        while layer:
            nxt = {}
            for mask, ends in layer.items():
                if size >= 3 and ends & adj[s]:
                    best = max(best, size)
                e = ends
                while e:
                    low = e & -e
                    v = low.bit_length() - 1
                    e ^= low
                    ext = adj[v] & higher & ~mask
                    while ext:
                        lw = ext & -ext
                        ext ^= lw
                        m2 = mask | lw
                        nxt[m2] = nxt.get(m2, 0) | lw
            layer = nxt
            size += 1
    return best


def longest_cycle_naive(g):
    """Longest cycle by DFS over all simple paths; for graphs of ~8 vertices."""
    adj = g.adjacency()
    best = 0

    def dfs(start, v, visited, length):
        nonlocal best
        for w in adj[v]:
            if w == start and length >= 3:
                best = max(best, length)
            elif w > start and w not in visited:
                visited.add(w)
                dfs(start, w, visited, length + 1)
                visited.remove(w)

    for s in range(g.vertex_count):
        dfs(s, s, {s}, 1)
    return best


def _tree_paths(tree):
    """All paths of ``tree`` joining two boundary vertices, as vertex lists."""
    adj = tree.adjacency()
    bnd = sorted(tree.boundary.tolist())
    paths = []
    for i, a in enumerate(bnd):
        parent = {a: None}
        stack = [a]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    stack.append(w)
        for b in bnd[i:]:
            path, cur = [], b
            while cur is not None:
                path.append(cur)
                cur = parent[cur]
            paths.append(path[::-1])
    return paths


def phi_exact(tree, max_vertices=MAX_PHI_VERTICES):
    """``phi(T)`` by exhaustive search over vertex-disjoint boundary paths.

    Branches on the smallest undecided vertex: either it stays uncovered or
    one of the admissible paths through it (disjoint from those chosen) is
    added.
    """
    n = len(tree)
    if n > max_vertices:
        raise TooLarge(f"{n} vertices > {max_vertices}")
    verts = tree.vertices.tolist()
    bit = {v: 1 << i for i, v in enumerate(verts)}
    masks = [sum(bit[v] for v in p) for p in _tree_paths(tree)]
    through = [[m for m in masks if m & (1 << i)] for i in range(n)]
    full = (1 << n) - 1
    best = n

    def search(decided, uncovered):
        nonlocal best
        if uncovered >= best:
            return
        if decided == full:
            best = uncovered
            return
        free = ~decided & full
        i = (free & -free).bit_length() - 1
        for m in through[i]:
            if not m & decided:
                search(decided | m, uncovered)
        search(decided | (1 << i), uncovered + 1)

    search(0, 0)
    return best


def hamilton_forced(g, forced=(), max_vertices=MAX_CYCLE_VERTICES):
    """Search for a Hamilton cycle of ``g`` using every edge in ``forced``.

    ``forced`` must be a matching of edges of ``g``.  Returns the cycle as a
    vertex list, or ``None``.  The DP state is ``(visited, end, entered by
    the end's forced edge)``; a vertex with an unused forced partner must
    step to that partner next.
    """
    n = g.vertex_count
    if n > max_vertices:
        raise TooLarge(f"{n} vertices > {max_vertices}")
    adj = _adj_masks(g)
    partner = [-1] * n
    for a, b in forced:
        a, b = int(a), int(b)
        if not adj[a] >> b & 1:
            raise ValueError(f"forced pair ({a}, {b}) is not an edge")
        if partner[a] != -1 or partner[b] != -1:
            raise ValueError("forced edges must form a matching")
        partner[a], partner[b] = b, a
    if n < 3:
        return None
    full = (1 << n) - 1
    s = next((v for v in range(n) if partner[v] != -1), 0)
    if partner[s] != -1:
        start = (1 << s | 1 << partner[s], partner[s], True)
    else:
        start = (1 << s, s, False)
    parents = {start: None}
    layer = [start]
    while layer:
        nxt = []
        for state in layer:
            mask, v, via = state
            if mask == full:
                if adj[v] >> s & 1 and (partner[v] == -1 or via) and v != s:
                    cycle, cur = [], state
                    while cur is not None:
                        cycle.append(cur[1])
                        cur = parents[cur]
                    if partner[s] != -1:
                        cycle.append(s)
                    return cycle[::-1]
                continue
            p = partner[v]
            if p != -1 and not via:
                if mask >> p & 1:
                    continue
                options = 1 << p
            else:
                options = adj[v] & ~mask
            while options:
                low = options & -options
                options ^= low
                w = low.bit_length() - 1
                key = (mask | low, w, partner[w] == v)
                if key not in parents:
                    parents[key] = state
                    nxt.append(key)
        layer = nxt
    return None


def hamilton_cycles_brute(g):
    """All Hamilton cycles as frozensets of edges; permutations, tiny graphs only."""
    n = g.vertex_count
    adj = [set(nb) for nb in g.adjacency()]
    cycles = set()
    for perm in itertools.permutations(range(1, n)):
        order = (0,) + perm
        if all(order[(i + 1) % n] in adj[order[i]] for i in range(n)):
            cycles.add(frozenset(frozenset((order[i], order[(i + 1) % n])) for i in range(n)))
    return cycles
