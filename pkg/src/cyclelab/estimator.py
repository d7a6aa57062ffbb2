"""Monte Carlo estimates of the longest-cycle length of ``G(n, c/n)``.

The estimate for one graph is ``|C2| - sum_T phi(T)``: the 2-core of the
giant minus the packing deficit of every tree left by the stripping
process.  Vertices on non-tree components are reported, not subtracted.
"""
from __future__ import annotations

import math
import statistics
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .analytic import corollary1
from .graph import two_core_of_giant
from .oracle import longest_cycle_exact
from .packing import phi_value
from .samplers import Seed, as_seed, sample_gnp
from .strip import classify, strip

CSV_COLUMNS = ("n", "c", "seed", "core_size", "sum_phi", "non_tree_mass",
               "l_hat_over_n", "corollary1", "ms")


@dataclass
class EstimateRecord:
    n: int
    c: float
    seed: int
    stream: int
    core_size: int
    core_edges: int
    s_l: int
    v1: int
    v2: int
    trees: int
    sum_phi: int
    non_tree_mass: int
    l_hat: int
    l_hat_over_n: float
    corollary1: float
    ms: float = 0.0
    tree_sizes: dict = field(default_factory=dict)
    phi_histogram: dict = field(default_factory=dict)

    def csv_row(self, timing=True):
        return [
            self.n, self.c, self.seed, self.core_size, self.sum_phi,
            self.non_tree_mass, repr(self.l_hat_over_n), repr(self.corollary1),
            f"{self.ms:.1f}" if timing else "",
        ]

    def to_dict(self):
        return asdict(self)


def analyze_graph(g, order_policy="min-id"):
    """Run the 2-core / strip / packing pipeline on one graph.

    Returns ``(core, strip_result, trees, phis, non_tree_mass)``.
    """
    core = two_core_of_giant(g)
    result = strip(core, order_policy)
    trees, mass = classify(result, core)
    phis = [phi_value(t) for t in trees]
    return core, result, trees, phis, mass


def estimate_graph(g, n=None, c=float("nan"), seed=0, stream=0):
    """:class:`EstimateRecord` for an already sampled graph."""
    t0 = time.perf_counter()
    n = g.vertex_count if n is None else n
    core, result, trees, phis, mass = analyze_graph(g)
    sum_phi = sum(phis)
    l_hat = core.vertex_count - sum_phi
    sizes = Counter(len(t) for t in trees)
    phist = Counter(phis)
    cor = corollary1(c)[0] if c > 1 else float("nan")
    return EstimateRecord(
        n=n, c=c, seed=seed, stream=stream,
        core_size=core.vertex_count, core_edges=core.edge_count,
        s_l=int(result.in_s.sum()), v1=int(result.v1.sum()), v2=int(result.v2.sum()),
        trees=len(trees), sum_phi=sum_phi, non_tree_mass=mass,
        l_hat=l_hat, l_hat_over_n=l_hat / n if n else 0.0, corollary1=cor,
        ms=(time.perf_counter() - t0) * 1e3,
        tree_sizes={str(k): sizes[k] for k in sorted(sizes)},
        phi_histogram={str(k): phist[k] for k in sorted(phist)},
    )


def estimate_once(n, c, seed):
    """Sample ``G(n, c/n)`` with ``seed`` and estimate its longest cycle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not c > 1:
        raise ValueError("need c > 1")
    seed = as_seed(seed)
    t0 = time.perf_counter()
    g = sample_gnp(n, c, seed)
    rec = estimate_graph(g, n, c, seed.master, seed.stream)
    rec.ms = (time.perf_counter() - t0) * 1e3
    return rec


def _trial(args):
    n, c, master, stream = args
    return estimate_once(n, c, Seed(master, stream))


@dataclass
class BatchResult:
    records: list
    mean: float
    stderr: float
    sd: float


def estimate_batch(n, c, trials, seed, threads=1):
    """``trials`` independent estimates; trial ``i`` uses stream ``i``.

    Records come back sorted by stream, so the result does not depend on
    ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    master = as_seed(seed).master
    jobs = [(n, c, master, i) for i in range(trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_trial, jobs))
    else:
        records = [_trial(j) for j in jobs]
    records.sort(key=lambda r: r.stream)
    vals = [r.l_hat_over_n for r in records]
    mean = statistics.fmean(vals)
    sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
    return BatchResult(records, mean, sd / math.sqrt(len(vals)), sd)


@dataclass
class SmallCheck:
    n: int
    core_size: int
    sum_phi: int
    non_tree_mass: int
    rhs: int
    longest_cycle: int

    @property
    def gap(self):
        return self.rhs - self.longest_cycle

    @property
    def holds(self):
        return self.longest_cycle <= self.rhs


def check_graph_upper_bound(g):
    """Compare the exact longest cycle of the 2-core with ``|C2| - sum phi``."""
    core, _, _, phis, mass = analyze_graph(g)
    rhs = core.vertex_count - sum(phis)
    return SmallCheck(g.vertex_count, core.vertex_count, sum(phis), mass, rhs,
                      longest_cycle_exact(core))


def exactness_check_small(n, c, trials, seed=0):
    """Upper-bound check of the estimate on ``trials`` small random graphs.

    Trial ``i`` uses stream ``seed.stream + i``.  Returns the list of
    :class:`SmallCheck` rows; ``holds`` must be true on every row, ``gap``
    records how far the estimate overshoots.
    """
    if n > 16:
        raise ValueError("exactness check is limited to n <= 16")
    base = as_seed(seed)
    return [check_graph_upper_bound(sample_gnp(n, c, Seed(base.master, base.stream + i)))
            for i in range(trials)]
