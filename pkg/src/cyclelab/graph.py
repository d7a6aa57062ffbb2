"""Immutable sparse graphs and the structural decompositions built on them.

A :class:`Graph` stores a CSR adjacency (``indptr``/``indices``) with sorted
neighbor lists.  Every derived subgraph keeps ``labels``, the map from its
local ids back to the ids of the graph it was cut from, so results can be
reported in the original coordinates.
"""
from __future__ import annotations

import heapq
from collections import deque
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class GraphFormatError(ValueError):
    """Raised when an edge list is malformed (loops, duplicates, bad ids)."""


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Parameters
    ----------
    indptr, indices : ndarray
        CSR adjacency; ``indices[indptr[v]:indptr[v+1]]`` are the sorted
        neighbors of ``v``.  Both directions of every edge are present.
    labels : ndarray, optional
        Parent ids of the local vertices.  Defaults to the identity.
    """

    __slots__ = ("indptr", "indices", "labels", "_degrees")

    def __init__(self, indptr, indices, labels=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int32)
        n = len(self.indptr) - 1
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self._degrees = np.diff(self.indptr)
        for arr in (self.indptr, self.indices, self.labels, self._degrees):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, n, edges, labels=None, check=True):
        """Build a graph from an ``(m, 2)`` array of undirected edges.

        With ``check=True`` self-loops, parallel edges and out-of-range ids
        raise :class:`GraphFormatError`.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        u, v = edges[:, 0], edges[:, 1]
        if check and len(edges):
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise GraphFormatError("edge endpoint outside [0, n)")
            if np.any(u == v):
                raise GraphFormatError("self-loop in edge list")
            lo, hi = np.minimum(u, v), np.maximum(u, v)
            key = lo * n + hi
            if len(np.unique(key)) != len(key):
                raise GraphFormatError("duplicate edge in edge list")
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        mat = sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
        )
        mat.sort_indices()
        return cls(mat.indptr, mat.indices, labels)

    @classmethod
    def empty(cls, n=0):
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int32))

    @property
    def vertex_count(self):
        return len(self.indptr) - 1

    @property
    def edge_count(self):
        return len(self.indices) // 2

    @property
    def degrees(self):
        return self._degrees

    def degree(self, v):
        return int(self._degrees[v])

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency(self):
        """Adjacency as a list of Python lists; convenient for small graphs."""
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[v]:ptr[v + 1]] for v in range(self.vertex_count)]

    def edges(self):
        """``(m, 2)`` array of edges with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.vertex_count, dtype=np.int64), self._degrees)
        dst = self.indices.astype(np.int64)
        keep = src < dst
        return np.column_stack([src[keep], dst[keep]])

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def to_csr(self):
        n = self.vertex_count
        return sparse.csr_matrix(
            (np.ones(len(self.indices), dtype=np.int8), self.indices, self.indptr),
            shape=(n, n),
        )

    def induced_subgraph(self, vertices):
        """Subgraph induced by ``vertices`` (bool mask or id array).

        Local ids follow increasing parent id; ``labels`` composes with this
        graph's own labels so they always point at the root graph.
        """
        n = self.vertex_count
        vertices = np.asarray(vertices)
        if vertices.dtype == bool:
            mask = vertices
        else:
            mask = np.zeros(n, dtype=bool)
            mask[vertices.astype(np.int64)] = True
        keep = np.flatnonzero(mask)
        new_id = np.full(n, -1, dtype=np.int64)
        new_id[keep] = np.arange(len(keep))
        src = np.repeat(np.arange(n, dtype=np.int64), self._degrees)
        dst = self.indices.astype(np.int64)
        sel = mask[src] & mask[dst]
        src, dst = new_id[src[sel]], new_id[dst[sel]]
        # src is already nondecreasing and dst sorted within each row
        counts = np.bincount(src, minlength=len(keep))
        indptr = np.zeros(len(keep) + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return Graph(indptr, dst, self.labels[keep])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.vertex_count, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


def check_graph(g):
    """Validate the simple-graph invariants of ``g``; raise on violation."""
    if not isinstance(g, Graph):
        raise TypeError(f"expected Graph, got {type(g).__name__}")
    n = g.vertex_count
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
    dst = g.indices.astype(np.int64)
    if len(dst) and (dst.min() < 0 or dst.max() >= n):
        raise GraphFormatError("neighbor id out of range")
    if np.any(src == dst):
        raise GraphFormatError("self-loop")
    if len(dst) % 2:
        raise GraphFormatError("odd adjacency length: asymmetric")
    fwd = np.sort(src * n + dst)
    if len(fwd) != len(np.unique(fwd)):
        raise GraphFormatError("parallel edge")
    if not np.array_equal(fwd, np.sort(dst * n + src)):
        raise GraphFormatError("adjacency not symmetric")
    return g


# -- serialization -----------------------------------------------------------

def write_edge_list(g, path):
    """Write ``g`` as a header line ``n m`` followed by one ``u v`` per edge."""
    e = g.edges()
    with open(path, "w") as fh:
        fh.write(f"{g.vertex_count} {len(e)}\n")
        np.savetxt(fh, e, fmt="%d")


def read_edge_list(path):
    """Read the ``n m`` / ``u v`` edge-list format; rejects loops and duplicates."""
    text = Path(path).read_text().split("\n", 1)
    header = text[0].split()
    if len(header) != 2:
        raise GraphFormatError("header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    body = text[1] if len(text) > 1 else ""
    data = np.array(body.split(), dtype=np.int64)
    if len(data) % 2:
        raise GraphFormatError("odd number of endpoint ids")
    edges = data.reshape(-1, 2)
    if len(edges) != m:
        raise GraphFormatError(f"header says {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


# -- decompositions ----------------------------------------------------------

def connected_components(g):
    """Return ``(count, labels)`` for the connected components of ``g``."""
    if g.vertex_count == 0:
        return 0, np.zeros(0, dtype=np.int32)
    return csgraph.connected_components(g.to_csr(), directed=False)


def giant_component(g):
    """Boolean mask of the largest component; ties go to the smallest min id."""
    n = g.vertex_count
    if n == 0:
        return np.zeros(0, dtype=bool)
    _, comp = connected_components(g)
    sizes = np.bincount(comp)
    # component labels are assigned in order of first (smallest) vertex
    _, first = np.unique(comp, return_index=True)
    best = max(range(len(sizes)), key=lambda k: (sizes[k], -first[k]))
    return comp == best


def peel_mask(g, alive=None):
    """Repeatedly drop vertices of degree <= 1; return the surviving mask."""
    n = g.vertex_count
    alive = np.ones(n, dtype=bool) if alive is None else alive.copy()
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
    deg = np.bincount(src, weights=alive[g.indices], minlength=n).astype(np.int64)
    frontier = np.flatnonzero(alive & (deg <= 1))
    while len(frontier):
        alive[frontier] = False
        starts, stops = g.indptr[frontier], g.indptr[frontier + 1]
        lens = stops - starts
        if lens.sum() == 0:
            break
        offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(lens.sum())
        nbrs = g.indices[offs]
        nbrs = nbrs[alive[nbrs]]
        np.subtract.at(deg, nbrs, 1)
        cand = np.unique(nbrs)
        frontier = cand[deg[cand] <= 1]
    return alive


def peel_mask_sequential(g, order="asc", alive=None):
    """Queue-based peeling with an explicit processing order.

    Slow reference used to check that the peeled set does not depend on the
    order in which low-degree vertices are removed.
    """
    n = g.vertex_count
    adj = g.adjacency()
    alive = [True] * n if alive is None else list(map(bool, alive))
    deg = [sum(alive[u] for u in adj[v]) if alive[v] else 0 for v in range(n)]
    sign = 1 if order == "asc" else -1
    heap = [sign * v for v in range(n) if alive[v] and deg[v] <= 1]
    heapq.heapify(heap)
    while heap:
        v = sign * heapq.heappop(heap)
        if not alive[v]:
            continue
        alive[v] = False
        for u in adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] <= 1:
                    heapq.heappush(heap, sign * u)
    return np.array(alive, dtype=bool)


def two_core_of_giant(g, scope="giant"):
    """The 2-core of the giant component of ``g``, as an induced subgraph.

    ``scope="all"`` peels the whole graph instead, which keeps small cyclic
    components; useful only for diagnostics.
    """
    if scope not in ("giant", "all"):
        raise ValueError(f"unknown scope {scope!r}")
    if g.vertex_count == 0:
        return Graph.empty()
    start = giant_component(g) if scope == "giant" else None
    return g.induced_subgraph(peel_mask(g, start))


def bfs_ball(g, v, k):
    """Levels of the BFS ball of radius ``k`` around ``v`` and its induced graph.

    ``levels[i]`` holds the vertices at distance exactly ``i``.  The induced
    graph numbers the ball's vertices in increasing id order and carries
    their ids in ``labels``.
    """
    if not 0 <= v < g.vertex_count:
        raise IndexError(f"vertex {v} out of range")
    if k < 0:
        raise ValueError("radius must be nonnegative")
    dist = {int(v): 0}
    levels = [[int(v)]]
    queue = deque([int(v)])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if d == k:
            continue
        for w in g.neighbors(u).tolist():
            if w not in dist:
                dist[w] = d + 1
                if len(levels) <= d + 1:
                    levels.append([])
                levels[d + 1].append(w)
                queue.append(w)
    levels = [np.array(sorted(lv), dtype=np.int64) for lv in levels]
    induced = g.induced_subgraph(np.fromiter(dist, dtype=np.int64))
    return levels, induced
