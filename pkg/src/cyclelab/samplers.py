"""Random graph generators.

All randomness flows through :class:`Seed`, a ``(master, stream)`` pair fed
to numpy's counter-based Philox-4x64 bit generator.  Trial ``i`` of a batch
uses ``stream = i`` so its output does not depend on scheduling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import TruncPoisson, solve_lambda
from .graph import Graph

DEGREE_SUM_BUDGET = 10**6
SIMPLICITY_BUDGET = 10**3


class SamplingError(RuntimeError):
    """A rejection sampler ran out of attempts."""

    def __init__(self, message, attempts, diagnostics=None):
        super().__init__(f"{message} after {attempts} attempts")
        self.attempts = attempts
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class Seed:
    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            val = getattr(self, name)
            if not 0 <= val < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer")

    def generator(self):
        return np.random.Generator(np.random.Philox(key=self.master | (self.stream << 64)))

    def spawn(self, stream):
        return Seed(self.master, stream)


def as_seed(seed):
    if isinstance(seed, Seed):
        return seed
    return Seed(int(seed))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return as_seed(seed).generator()


# -- G(n, p) -----------------------------------------------------------------

def _pair_from_index(k):
    """Map linear indices over ``{(i, j): j < i}`` (row-major) to pairs."""
    i = ((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    i -= (i * (i - 1) // 2) > k
    i += ((i + 1) * i // 2) <= k
    j = k - i * (i - 1) // 2
    return i, j


def sample_gnp(n, c, seed):
    """Sample ``G(n, p)`` with ``p = min(c/n, 1)`` by geometric skipping."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not c > 0:
        raise ValueError("mean degree c must be positive")
    p = min(c / n, 1.0)
    total = n * (n - 1) // 2
    if total == 0:
        return Graph.empty(n)
    if p >= 1.0:
        idx = np.arange(total, dtype=np.int64)
    else:
        rng = _rng(seed)
        chunk = int(total * p + 6 * math.sqrt(total * p) + 16)
        parts, pos = [], -1
        while True:
            gaps = rng.geometric(p, size=chunk)
            pts = pos + np.cumsum(gaps)
            if pts[-1] >= total:
                parts.append(pts[pts < total])
                break
            parts.append(pts)
            pos = int(pts[-1])
        idx = np.concatenate(parts)
    i, j = _pair_from_index(idx)
    return Graph.from_edges(n, np.column_stack([i, j]), check=False)


# -- degree sequences with minimum degree 2 ------------------------------------

@dataclass(frozen=True)
class DegreeSequence:
    degrees: np.ndarray
    attempts: int = 1

    @property
    def total(self):
        return int(self.degrees.sum())

    def __len__(self):
        return len(self.degrees)


def _trunc_poisson_table(lam, tail=1e-17):
    """Cumulative distribution of Poisson(lam) conditioned on >= 2."""
    tp = TruncPoisson(lam)
    t = 2
    pmf = []
    while True:
        p = tp.pmf(t)
        pmf.append(p)
        if t > lam and p < tail:
            break
        t += 1
    cdf = np.cumsum(pmf)
    cdf /= cdf[-1]
    return cdf


def sample_degrees_min2(N, M, seed, budget=DEGREE_SUM_BUDGET, batch=None):
    """Truncated-Poisson degrees conditioned on summing to ``2M``.

    Whole vectors are redrawn until one hits the target sum exactly, so the
    result has exactly the conditional law.  ``attempts`` on the returned
    sequence counts the vectors drawn.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if M < N:
        raise ValueError("need M >= N for minimum degree 2")
    target = 2 * M
    if target == 2 * N:
        return DegreeSequence(np.full(N, 2, dtype=np.int64), 1)
    if N == 1:
        return DegreeSequence(np.array([target], dtype=np.int64), 1)
    lam = solve_lambda(target / N).lam
    cdf = _trunc_poisson_table(lam)
    rng = _rng(seed)
    if batch is None:
        batch = max(1, min(1024, 2**22 // N))
    attempts = 0
    while attempts < budget:
        rows = min(batch, budget - attempts)
        u = rng.random((rows, N))
        draws = np.searchsorted(cdf, u, side="right").astype(np.int64) + 2
        hits = np.flatnonzero(draws.sum(axis=1) == target)
        if len(hits):
            attempts += int(hits[0]) + 1
            return DegreeSequence(draws[hits[0]].copy(), attempts)
        attempts += rows
    raise SamplingError("degree sum never matched 2M", attempts)


# -- configuration model -----------------------------------------------------

@dataclass(frozen=True)
class MultiGraphPairing:
    """A perfect matching of configuration points and the multigraph it induces."""

    n: int
    point_pairs: np.ndarray
    vertex_pairs: np.ndarray

    @property
    def loops(self):
        return int(np.sum(self.vertex_pairs[:, 0] == self.vertex_pairs[:, 1]))

    @property
    def multi_edges(self):
        """Number of surplus copies among non-loop edges."""
        vp = np.sort(self.vertex_pairs, axis=1)
        vp = vp[vp[:, 0] != vp[:, 1]]
        if not len(vp):
            return 0
        return len(vp) - len(np.unique(vp[:, 0] * self.n + vp[:, 1]))

    def is_simple(self):
        return self.loops == 0 and self.multi_edges == 0

    def to_graph(self):
        if not self.is_simple():
            raise ValueError("pairing has loops or multiple edges")
        return Graph.from_edges(self.n, self.vertex_pairs, check=False)


def pair_configuration(degrees, seed):
    """Uniform random perfect matching of the configuration points."""
    d = np.asarray(getattr(degrees, "degrees", degrees), dtype=np.int64)
    total = int(d.sum())
    if total % 2:
        raise ValueError("degree sum must be even")
    owner = np.repeat(np.arange(len(d), dtype=np.int64), d)
    perm = _rng(seed).permutation(total).reshape(-1, 2)
    return MultiGraphPairing(len(d), perm, owner[perm])


def sample_gnm_min2(N, M, seed, budget=SIMPLICITY_BUDGET, return_stats=False):
    """``G(N, M)`` conditioned on minimum degree 2, via the sequence model.

    Draws a conditioned degree sequence and a pairing until the multigraph
    is simple.  With ``return_stats=True`` also returns a dict holding the
    number of attempts and the observed simplicity acceptance rate.
    """
    rng = _rng(seed)
    loops = multi = 0
    for attempt in range(1, budget + 1):
        deg = sample_degrees_min2(N, M, rng)
        pairing = pair_configuration(deg, rng)
        if pairing.is_simple():
            g = pairing.to_graph()
            if return_stats:
                return g, {"attempts": attempt, "acceptance_rate": 1.0 / attempt}
            return g
        loops += pairing.loops
        multi += pairing.multi_edges
    raise SamplingError(
        "no simple pairing", budget, {"loops": loops, "multi_edges": multi}
    )
