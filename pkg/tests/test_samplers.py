import itertools
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from cyclelab.samplers import (
    SamplingError, Seed, _pair_from_index, pair_configuration, sample_degrees_min2,
    sample_gnm_min2, sample_gnp,
)


def test_seed_validation_and_streams():
    with pytest.raises(ValueError):
        Seed(-1)
    with pytest.raises(ValueError):
        Seed(0, 2**64)
    a = Seed(5, 0).generator().random(4)
    b = Seed(5, 1).generator().random(4)
    assert not np.allclose(a, b)
    assert np.array_equal(a, Seed(5).generator().random(4))


def test_pair_index_bijection():
    n = 300
    k = np.arange(n * (n - 1) // 2)
    i, j = _pair_from_index(k)
    expected = [(a, b) for a in range(n) for b in range(a)]
    assert list(zip(i.tolist(), j.tolist())) == expected


def test_pair_index_large_boundaries():
    # rows start at triangular numbers; check both sides of each boundary far out
    rows = np.array([10**6 - 1, 10**6, 4 * 10**6 + 7, 2**31 + 5], dtype=np.int64)
    starts = rows * (rows - 1) // 2
    for off, exp_i, exp_j in ((0, rows, 0), (-1, rows - 1, rows - 2)):
        i, j = _pair_from_index(starts + off)
        assert np.array_equal(i, exp_i) and np.array_equal(j, exp_j + 0 * rows)


def test_gnp_is_reproducible():
    assert sample_gnp(500, 3.0, Seed(9, 2)) == sample_gnp(500, 3.0, Seed(9, 2))
    assert sample_gnp(500, 3.0, Seed(9, 2)) != sample_gnp(500, 3.0, Seed(9, 3))


def test_gnp_edge_count_moments():
    n, c = 2000, 4.0
    p = c / n
    pairs = n * (n - 1) // 2
    counts = np.array([sample_gnp(n, c, Seed(1, s)).edge_count for s in range(60)])
    mean, sd = pairs * p, np.sqrt(pairs * p * (1 - p))
    assert abs(counts.mean() - mean) < 5 * sd / np.sqrt(len(counts))
    assert 0.6 * sd < counts.std(ddof=1) < 1.4 * sd


def test_gnp_uniform_on_four_vertices():
    # p = 1/2 on 4 vertices makes all 64 labeled graphs equally likely
    draws = Counter()
    for s in range(6400):
        g = sample_gnp(4, 2.0, Seed(3, s))
        draws[tuple(map(tuple, g.edges().tolist()))] += 1
    assert len(draws) == 64
    assert stats.chisquare(list(draws.values())).pvalue > 1e-4


def test_gnp_dense_limit():
    g = sample_gnp(6, 10.0, Seed(0))
    assert g.edge_count == 15


def test_degrees_min2_postconditions():
    for s in range(20):
        d = sample_degrees_min2(500, 800, Seed(2, s))
        assert d.total == 1600 and d.degrees.min() >= 2 and len(d) == 500
    assert sample_degrees_min2(7, 7, Seed(0)).degrees.tolist() == [2] * 7
    with pytest.raises(ValueError):
        sample_degrees_min2(10, 9, Seed(0))


def test_degrees_budget_exhaustion():
    with pytest.raises(SamplingError):
        sample_degrees_min2(2000, 3000, Seed(0), budget=1, batch=1)


def _matchings(points):
    if not points:
        yield []
        return
    a, rest = points[0], points[1:]
    for i, b in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            yield [(a, b)] + m


def test_pairing_matches_exhaustive_enumeration():
    degrees = [2, 2]
    owner = [v for v, d in enumerate(degrees) for _ in range(d)]
    outcome = Counter()
    for m in _matchings(list(range(sum(degrees)))):
        loops = sum(owner[a] == owner[b] for a, b in m)
        outcome["loops" if loops else "double"] += 1
    total = sum(outcome.values())
    draws = Counter()
    trials = 6000
    for s in range(trials):
        pr = pair_configuration(np.array(degrees), Seed(4, s))
        draws["loops" if pr.loops else "double"] += 1
        assert pr.loops in (0, 2) and (pr.loops or pr.multi_edges == 1)
    for key in outcome:
        p = outcome[key] / total
        assert abs(draws[key] / trials - p) < 4 * np.sqrt(p * (1 - p) / trials)


def test_gnm_min2_triangle():
    g = sample_gnm_min2(3, 3, Seed(0))
    assert sorted(map(tuple, g.edges().tolist())) == [(0, 1), (0, 2), (1, 2)]


def test_gnm_min2_uniform_on_k4_minus_edge():
    # simple graphs with 4 vertices, 5 edges, min degree 2: K4 minus one of 6 edges
    draws = Counter()
    for s in range(1800):
        g = sample_gnm_min2(4, 5, Seed(8, s))
        assert g.edge_count == 5 and g.degrees.min() >= 2
        missing = {(a, b) for a, b in itertools.combinations(range(4), 2)} - set(
            map(tuple, g.edges().tolist()))
        draws[missing.pop()] += 1
    assert len(draws) == 6
    assert stats.chisquare(list(draws.values())).pvalue > 1e-4


def test_gnm_min2_stats():
    g, st = sample_gnm_min2(300, 450, Seed(1), return_stats=True)
    assert g.edge_count == 450 and g.degrees.min() >= 2
    assert st["attempts"] >= 1 and 0 < st["acceptance_rate"] <= 1
