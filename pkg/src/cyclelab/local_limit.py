"""Rooted-tree neighborhoods and the truncated local-limit series.

Rooted trees are identified by their AHU code: a vertex's code is ``(``,
followed by its children's codes in sorted order, followed by ``)``.  The
canonical vertex numbering is the preorder of that sorted expansion, so two
isomorphic rooted trees get the same code and the same parent array.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import analytic
from .graph import Graph, two_core_of_giant
from .packing import phi_value
from .strip import component_tree, strip

ATTACH_FRONTIER = "frontier"
ATTACH_BALL = "ball"


def _code_from_children(children, root=0):
    """AHU code of the tree given as a child-list mapping."""
    codes = {}
    order = [root]
    for v in order:
        order.extend(children[v])
    for v in reversed(order):
        codes[v] = "(" + "".join(sorted(codes[u] for u in children[v])) + ")"
    return codes[root]


def _split_code(code):
    """Child codes of the root of ``code``."""
    parts, depth, start = [], 0, 1
    for i in range(1, len(code) - 1):
        depth += 1 if code[i] == "(" else -1
        if depth == 0:
            parts.append(code[start:i + 1])
            start = i + 1
    return parts


@dataclass(frozen=True)
class RootedTree:
    """Canonical rooted tree; vertex 0 is the root, ids follow preorder."""

    code: str
    parent: tuple = field(compare=False)

    @classmethod
    def from_code(cls, code):
        parent = []
        stack = []
        for ch in code:
            if ch == "(":
                parent.append(stack[-1] if stack else -1)
                stack.append(len(parent) - 1)
            else:
                stack.pop()
        return cls(code, tuple(parent))

    @classmethod
    def from_parent(cls, parent, root=None):
        """Canonicalize a tree given by a parent array (root has parent -1)."""
        parent = list(parent)
        if root is None:
            root = parent.index(-1)
        children = {v: [] for v in range(len(parent))}
        for v, p in enumerate(parent):
            if p >= 0:
                children[p].append(v)
        return cls.from_code(_code_from_children(children, root))

    @classmethod
    def from_edges(cls, n, edges, root):
        adj = [[] for _ in range(n)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        parent = [-2] * n
        parent[root] = -1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if parent[w] == -2:
                    parent[w] = v
                    queue.append(w)
        if -2 in parent:
            raise ValueError("edges do not span a tree")
        return cls.from_parent(parent, root)

    @property
    def size(self):
        return len(self.parent)

    def children(self):
        ch = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return ch

    @property
    def depths(self):
        d = [0] * self.size
        for v in range(1, self.size):
            d[v] = d[self.parent[v]] + 1
        return d

    @property
    def depth(self):
        return max(self.depths)

    @property
    def levels(self):
        out = [[] for _ in range(self.depth + 1)]
        for v, d in enumerate(self.depths):
            out[d].append(v)
        return out

    @property
    def degrees(self):
        """Degrees in the unrooted tree (the ``z`` sequence)."""
        z = [len(c) for c in self.children()]
        for v in range(1, self.size):
            z[v] += 1
        return z

    def edges(self):
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]

    @property
    def aut(self):
        return aut_rooted(self)


@lru_cache(maxsize=None)
def _aut_code(code):
    kids = _split_code(code)
    total = 1
    for sub, mult in Counter(kids).items():
        total *= math.factorial(mult) * _aut_code(sub) ** mult
    return total


def aut_rooted(tree):
    """Number of automorphisms fixing the root.

    Product over vertices of ``m!`` for each multiplicity ``m`` of identical
    child subtrees.
    """
    return _aut_code(tree.code)


# -- enumeration -------------------------------------------------------------

def iter_rooted_trees(size, max_depth):
    """Lazily yield codes of rooted trees with ``size`` vertices, depth <= ``max_depth``.

    Subtrees come from the memoized :func:`rooted_trees` of smaller sizes, so
    only the requested size is generated on demand.
    """
    if size == 1:
        yield "()"
        return
    if max_depth == 0:
        return
    pool = []
    for s in range(1, size):
        pool.extend(rooted_trees(s, max_depth - 1))
    sizes = [len(c) // 2 for c in pool]
    chosen = []

    def extend(start, remaining):
        if remaining == 0:
            yield "(" + "".join(sorted(pool[i] for i in chosen)) + ")"
            return
        for i in range(start, len(pool)):
            if sizes[i] <= remaining:
                chosen.append(i)
                yield from extend(i, remaining - sizes[i])
                chosen.pop()

    yield from extend(0, size - 1)


@lru_cache(maxsize=None)
def rooted_trees(size, max_depth):
    """Sorted codes of all rooted trees with ``size`` vertices and depth <= ``max_depth``."""
    return tuple(sorted(iter_rooted_trees(size, max_depth)))


def level_caps(c, eps, k1):
    """Upper bounds ``3 c^i k1 / eps`` on the size of BFS level ``i``."""
    return [3 * c**i * k1 / eps for i in range(k1 + 1)]


def enumerate_h_eps(c, eps, size_cap, max_candidates=None, report=None):
    """Yield the canonical rooted trees of the truncated good-neighborhood family.

    Trees have depth at most ``k1 = k1_of(eps, c)``, level sizes within
    :func:`level_caps` and at most ``size_cap`` vertices; they are produced
    by increasing size.  ``max_candidates`` bounds the number of trees
    generated before the level filter.  If ``report`` is a dict it receives
    ``k1``, ``candidates``, ``accepted``, ``largest_complete_size`` and
    ``truncated``.
    """
    k1 = analytic.k1_of(eps, c)
    caps = level_caps(c, eps, k1)
    stats = {"k1": k1, "candidates": 0, "accepted": 0,
             "largest_complete_size": 0, "truncated": True}
    if report is not None:
        report.update(stats)
    for size in range(1, size_cap + 1):
        for code in iter_rooted_trees(size, k1):
            if max_candidates is not None and stats["candidates"] >= max_candidates:
                if report is not None:
                    report.update(stats)
                return
            stats["candidates"] += 1
            tree = RootedTree.from_code(code)
            if all(len(lv) <= cap for lv, cap in zip(tree.levels, caps)):
                stats["accepted"] += 1
                if report is not None:
                    report.update(stats)
                yield tree
        stats["largest_complete_size"] = size
        if report is not None:
            report.update(stats)
    # level caps bound the family, so it is complete once size_cap covers them
    max_total = 1 + sum(math.floor(cap) for cap in caps[1:])
    stats["truncated"] = size_cap < max_total
    if report is not None:
        report.update(stats)


# -- the completed neighborhood graph ----------------------------------------

def build_gv(tree, k1, attach=ATTACH_FRONTIER):
    """The tree plus a disjoint ``K_{3,3}``.

    With ``attach="frontier"`` every tree vertex at depth exactly ``k1`` is
    joined to the three vertices of one fixed side; ``attach="ball"`` joins
    every tree vertex.  Tree vertices keep their canonical ids; the gadget
    uses ids ``k..k+5`` with side ``k..k+2`` receiving the attachments.
    """
    if tree.depth > k1:
        raise ValueError("tree deeper than k1")
    k = tree.size
    side_a, side_b = range(k, k + 3), range(k + 3, k + 6)
    edges = list(tree.edges())
    edges += [(a, b) for a in side_a for b in side_b]
    if attach == ATTACH_FRONTIER:
        hooked = [v for v, d in enumerate(tree.depths) if d == k1]
    elif attach == ATTACH_BALL:
        hooked = list(range(k))
    else:
        raise ValueError(f"unknown attach mode {attach!r}")
    edges += [(v, a) for v in hooked for a in side_a]
    return Graph.from_edges(k + 6, np.array(edges, dtype=np.int64))


@dataclass(frozen=True)
class RootValue:
    value: Fraction
    status: str


def f_root_detail(tree, k1, attach=ATTACH_FRONTIER):
    """``f`` at the root together with why it took that value.

    ``status`` is ``"peeled"`` (root not in the local 2-core), ``"core"``
    (root never absorbed), ``"non-tree"`` (root absorbed into a component
    with a cycle) or ``"tree"``.
    """
    gv = build_gv(tree, k1, attach)
    core = two_core_of_giant(gv)
    hits = np.flatnonzero(core.labels == 0)
    if not len(hits):
        return RootValue(Fraction(0), "peeled")
    root = int(hits[0])
    res = strip(core)
    if not res.in_s[root]:
        return RootValue(Fraction(0), "core")
    comp = next(c for c in res.components if root in set(c.vertices.tolist()))
    if not comp.is_tree:
        return RootValue(Fraction(0), "non-tree")
    local = component_tree(core, res, comp)
    v0 = len(comp) - len(local.boundary)
    if v0 == 0:
        return RootValue(Fraction(0), "tree")
    return RootValue(Fraction(phi_value(local), v0), "tree")


def f_root(tree, k1, attach=ATTACH_FRONTIER):
    """``f(o_H)``: local deficit of the root's tree divided by its trapped size."""
    return f_root_detail(tree, k1, attach).value


def f_eps(c, eps, size_cap, N, M, variant="exp", attach=ATTACH_FRONTIER,
          max_candidates=None):
    """Truncated local-limit sum over the enumerated tree neighborhoods.

    Each tree contributes ``f(o_H) * rho_{H,o_H}``; both numerator variants
    are accumulated and ``variant`` picks the headline ``value``.  The
    report also carries the total ``rho`` mass of the evaluated trees.
    """
    if variant not in ("exp", "f2"):
        raise ValueError(f"unknown variant {variant!r}")
    lam = analytic.solve_lambda(2 * M / N).lam
    enum_report = {}
    sums = {"exp": 0.0, "f2": 0.0}
    mass = {"exp": 0.0, "f2": 0.0}
    evaluated = nonzero = 0
    k1 = analytic.k1_of(eps, c)
    for tree in enumerate_h_eps(c, eps, size_cap, max_candidates, enum_report):
        evaluated += 1
        fr = f_root(tree, k1, attach)
        aut = aut_rooted(tree)
        for var in sums:
            rho = analytic.rho_tree(tree.size, aut, N, M, lam, var)
            mass[var] += rho
            if fr:
                sums[var] += float(fr) * rho
        nonzero += fr > 0
    report = {
        "value": sums[variant],
        "variant": variant,
        "value_exp": sums["exp"],
        "value_f2": sums["f2"],
        "rho_mass_exp": mass["exp"],
        "rho_mass_f2": mass["f2"],
        "trees_evaluated": evaluated,
        "trees_nonzero": nonzero,
        "truncated": bool(enum_report.get("truncated", True)),
        "candidates": enum_report.get("candidates", 0),
        "largest_complete_size": enum_report.get("largest_complete_size", 0),
        "k1": k1,
        "lambda": lam,
        "attach": attach,
    }
    return sums[variant], report


# -- empirical neighborhoods -------------------------------------------------

@dataclass
class Census:
    counts: Counter
    non_tree: int = 0
    oversized: int = 0

    @property
    def total(self):
        return sum(self.counts.values()) + self.non_tree + self.oversized


def neighborhood_census(g, k1, max_size):
    """Count radius-``k1`` balls by canonical rooted-tree code.

    Balls containing a cycle go to ``non_tree``; tree balls with more than
    ``max_size`` vertices go to ``oversized``.
    """
    adj = g.adjacency()
    counts = Counter()
    non_tree = oversized = 0
    for v in range(g.vertex_count):
        dist = {v: 0}
        order = [v]
        for u in order:
            if dist[u] == k1:
                continue
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    order.append(w)
        members = set(order)
        twice = sum(1 for u in order for w in adj[u] if w in members)
        if twice // 2 != len(order) - 1:
            non_tree += 1
            continue
        if len(order) > max_size:
            oversized += 1
            continue
        pos = {u: i for i, u in enumerate(order)}
        edges = [(pos[u], pos[w]) for u in order for w in adj[u] if w in members and pos[u] < pos[w]]
        counts[RootedTree.from_edges(len(order), edges, 0).code] += 1
    return Census(counts, non_tree, oversized)


def star_code(leaves):
    """Code of the star with ``leaves`` leaves rooted at its center."""
    return "(" + "()" * leaves + ")"
