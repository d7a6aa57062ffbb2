"""The stripping process on a 2-core and the decomposition of what it absorbs.

Starting from ``S = {}``, two moves are applied until neither is available:

* case ``a``: a vertex ``v`` in ``S`` has one or two neighbors outside ``S``;
  those neighbors join ``S``.
* case ``b``: a vertex ``v`` outside ``S`` has at most two neighbors outside
  ``S``; ``v`` and those neighbors join ``S``.

The terminal set does not depend on the order of moves.  The
implementation keeps, for every vertex, the number of neighbors still
outside ``S``, so each absorbed vertex costs ``O(deg)``.
"""
from __future__ import annotations

import heapq
import random
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

DEFAULT_LOG_CAP = 10_000
ORDER_POLICIES = ("min-id", "max-id", "random")


class NotATwoCore(ValueError):
    """The input to :func:`strip` has a vertex of degree at most one."""


@dataclass
class Component:
    vertices: np.ndarray
    edge_count: int

    @property
    def is_tree(self):
        return self.edge_count == len(self.vertices) - 1

    def __len__(self):
        return len(self.vertices)


@dataclass
class Tree:
    """A tree component together with its interface to the rest of the core.

    ``vertices`` and ``edges`` use the ids of the host graph; ``boundary``
    holds the vertices with a neighbor outside the tree.
    """

    vertices: np.ndarray
    edges: np.ndarray
    boundary: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=np.int64)
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        self.boundary = np.asarray(self.boundary, dtype=np.int64)

    @classmethod
    def from_edges(cls, edges, boundary, vertices=None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if vertices is None:
            vertices = np.unique(edges) if len(edges) else np.unique(boundary)
        return cls(np.sort(vertices), edges, np.sort(np.asarray(boundary, dtype=np.int64)))

    def __len__(self):
        return len(self.vertices)

    def adjacency(self):
        adj = {int(v): [] for v in self.vertices}
        for u, v in self.edges.tolist():
            adj[u].append(v)
            adj[v].append(u)
        for nb in adj.values():
            nb.sort()
        return adj

    def check(self):
        n = len(self.vertices)
        if len(self.edges) != n - 1:
            raise ValueError("tree must have |V| - 1 edges")
        adj = self.adjacency()
        seen = {int(self.vertices[0])}
        stack = [int(self.vertices[0])]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise ValueError("tree is not connected")
        if not set(self.boundary.tolist()) <= seen:
            raise ValueError("boundary must be a subset of the vertices")
        return self


@dataclass
class StripResult:
    """Outcome of :func:`strip` in the coordinates of the input core.

    ``in_s`` marks ``S_L``; ``v1`` the vertices left outside; ``v2`` the
    vertices of ``S_L`` with a neighbor in ``v1``.  ``v0`` holds, per
    component, its vertices without a neighbor in ``v1``.
    """

    n: int
    in_s: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    components: list
    v0: list
    step_log: list = field(default_factory=list)
    steps: int = 0

    @property
    def s_l(self):
        return np.flatnonzero(self.in_s)

    def summary(self):
        trees = [c for c in self.components if c.is_tree]
        hist = Counter(len(t) for t in trees)
        return {
            "S_L": int(self.in_s.sum()),
            "V1": int(self.v1.sum()),
            "V2": int(self.v2.sum()),
            "trees": len(trees),
            "tree_size_histogram": {str(k): hist[k] for k in sorted(hist)},
            "non_tree_mass": int(sum(len(c) for c in self.components if not c.is_tree)),
        }


def _seed_int(seed):
    if seed is None or isinstance(seed, int):
        return seed
    return (seed.master << 64) | seed.stream


class _Picker:
    """Work-list of pivot vertices served in the order the policy dictates."""

    def __init__(self, policy, seed=None):
        if policy in ("min-id", "max-id"):
            self.sign = 1 if policy == "min-id" else -1
            self.heap = []
            self.rand = None
        elif policy == "random":
            self.items = []
            self.rand = random.Random(_seed_int(seed))
        else:
            raise ValueError(f"unknown order policy {policy!r}")

    def push(self, v):
        if self.rand is None:
            heapq.heappush(self.heap, self.sign * v)
        else:
            self.items.append(v)

    def pop(self):
        if self.rand is None:
            return self.sign * heapq.heappop(self.heap)
        i = self.rand.randrange(len(self.items))
        self.items[i], self.items[-1] = self.items[-1], self.items[i]
        return self.items.pop()

    def __bool__(self):
        return bool(self.heap if self.rand is None else self.items)


def strip(core, order_policy="min-id", seed=None, log_cap=DEFAULT_LOG_CAP):
    """Run the stripping process on the 2-core ``core``.

    ``order_policy`` is ``"min-id"``, ``"max-id"`` or ``"random"`` (seeded by
    ``seed``) and only decides which eligible pivot moves first.  At most
    ``log_cap`` moves are kept in ``step_log`` as ``(case, pivot, added)``.
    """
    n = core.vertex_count
    deg = core.degrees
    if n and deg.min() <= 1:
        raise NotATwoCore("input has a vertex of degree <= 1")
    indptr = core.indptr.tolist()
    indices = core.indices
    out = deg.tolist()
    in_s = [False] * n
    picker = _Picker(order_policy, seed)
    for v in np.flatnonzero(deg <= 2).tolist():
        picker.push(v)
    log, steps = [], 0

    def nbrs(v):
        return indices[indptr[v]:indptr[v + 1]].tolist()

    def absorb(w):
        in_s[w] = True
        if 1 <= out[w] <= 2:
            picker.push(w)
        for y in nbrs(w):
            out[y] -= 1
            if in_s[y] and 1 <= out[y] <= 2 or not in_s[y] and out[y] <= 2:
                picker.push(y)

    while picker:
        v = picker.pop()
        if in_s[v]:
            if not 1 <= out[v] <= 2:
                continue
            case, added = "a", [w for w in nbrs(v) if not in_s[w]]
        else:
            if out[v] > 2:
                continue
            case, added = "b", [v] + [w for w in nbrs(v) if not in_s[w]]
        for w in added:
            absorb(w)
        steps += 1
        if len(log) < log_cap:
            log.append((case, v, added))

    in_s = np.array(in_s, dtype=bool)
    return _decompose(core, in_s, log, steps)


def _decompose(core, in_s, log, steps):
    n = core.vertex_count
    v1 = ~in_s
    src = np.repeat(np.arange(n, dtype=np.int64), core.degrees)
    touches_v1 = np.bincount(src, weights=v1[core.indices], minlength=n) > 0
    v2 = in_s & touches_v1
    adj_ptr, adj_ind = core.indptr, core.indices
    comp_of = {}
    components, v0 = [], []
    for s in np.flatnonzero(in_s).tolist():
        if s in comp_of:
            continue
        cid = len(components)
        comp_of[s] = cid
        members, twice_edges = [s], 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj_ind[adj_ptr[u]:adj_ptr[u + 1]].tolist():
                if not in_s[w]:
                    continue
                twice_edges += 1
                if w not in comp_of:
                    comp_of[w] = cid
                    members.append(w)
                    queue.append(w)
        members = np.array(sorted(members), dtype=np.int64)
        components.append(Component(members, twice_edges // 2))
        v0.append(members[~v2[members]])
    return StripResult(n, in_s, v1, v2, components, v0, log, steps)


def component_tree(core, result, comp):
    """Build the :class:`Tree` for a tree component of ``result``."""
    verts = comp.vertices
    inside = np.zeros(core.vertex_count, dtype=bool)
    inside[verts] = True
    edges = []
    for u in verts.tolist():
        for w in core.neighbors(u).tolist():
            if u < w and inside[w]:
                edges.append((u, w))
    return Tree(verts, np.array(edges, dtype=np.int64).reshape(-1, 2), verts[result.v2[verts]])


def classify(result, core=None):
    """Split components into trees and the vertex mass of non-tree ones.

    Returns ``(trees, non_tree_mass)``.  With ``core`` given, ``trees`` holds
    :class:`Tree` objects with edges and boundary; otherwise the tree
    :class:`Component` records themselves.
    """
    trees, mass = [], 0
    for comp in result.components:
        if comp.is_tree:
            trees.append(comp if core is None else component_tree(core, result, comp))
        else:
            mass += len(comp)
    return trees, mass
