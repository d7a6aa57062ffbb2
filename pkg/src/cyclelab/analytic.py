"""Closed-form and root-finding quantities for the 2-core and its local limit."""
from __future__ import annotations

import math
from dataclasses import dataclass

X_TOL = 1e-12
LAMBDA_TOL = 1e-10


def bisect(fn, lo, hi, tol=0.0, max_iter=2000):
    """Bisection for a sign change of ``fn`` on ``[lo, hi]``.

    Runs until ``|fn(mid)| <= tol`` or the bracket collapses to adjacent
    floats, and returns the bracket end with the smaller residual.
    """
    flo, fhi = fn(lo), fn(hi)
    if (flo > 0) == (fhi > 0) and flo != 0 and fhi != 0:
        raise ValueError("root not bracketed")
    for _ in range(max_iter):
        if flo == 0 or fhi == 0:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = fn(mid)
        if abs(fm) <= tol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo if abs(flo) <= abs(fhi) else hi


# -- giant component / 2-core ------------------------------------------------

def solve_x(c):
    """Root in ``(0, 1)`` of ``x e^{-x} = c e^{-c}`` for ``c > 1``."""
    if not c > 1:
        raise ValueError("solve_x needs c > 1")
    target = c * math.exp(-c)
    # the root is below 1 while x e^{-x} increases there
    return bisect(lambda x: x * math.exp(-x) - target, 0.0, 1.0)


def x_series(c, terms=None):
    """Lagrange series ``sum_k k^{k-1}/k! (c e^{-c})^k`` for the same root."""
    y = c * math.exp(-c)
    if terms is not None:
        return sum(k ** (k - 1) / math.factorial(k) * y**k for k in range(1, terms + 1))
    total, k = 0.0, 1
    while True:
        term = math.exp((k - 1) * math.log(k) - math.lgamma(k + 1) + k * math.log(y))
        total += term
        if term < 1e-18 * total or k > 2000:
            return total
        k += 1


@dataclass(frozen=True)
class CoreParams:
    c: float
    x: float
    core_vertex_fraction: float
    core_edge_fraction: float

    @property
    def core_ratio(self):
        """Mean degree ``2M/N`` of the 2-core."""
        return 2 * self.core_edge_fraction / self.core_vertex_fraction


def core_fractions(c):
    x = solve_x(c)
    return CoreParams(
        c=c,
        x=x,
        core_vertex_fraction=(1 - x) * (1 - x / c),
        core_edge_fraction=(1 - x / c) ** 2 * c / 2,
    )


def corollary1(c):
    """Explicit terms of the large-c longest-cycle fraction and the error scale.

    Returns ``(1 - (c+1)e^{-c} - c^2 e^{-2c}, c^6 e^{-3c})``.
    """
    if not c > 1:
        raise ValueError("corollary1 needs c > 1")
    value = 1 - (c + 1) * math.exp(-c) - c * c * math.exp(-2 * c)
    return value, c**6 * math.exp(-3 * c)


# -- truncated Poisson -------------------------------------------------------

def f_k(k, lam):
    """``e^lam - sum_{i<k} lam^i / i!``, computed without cancellation.

    For ``lam`` small relative to ``k`` the tail series is summed directly.
    """
    if k <= 0:
        return math.exp(lam)
    if lam == 0:
        return 0.0
    if lam < k + 10:
        # tail sum_{i>=k} lam^i/i!
        term = math.exp(k * math.log(lam) - math.lgamma(k + 1))
        total, i = 0.0, k
        while True:
            total += term
            i += 1
            term *= lam / i
            if term < 1e-17 * total:
                return total
    return math.exp(lam) - sum(lam**i / math.factorial(i) for i in range(k))


def log_f_k(k, lam):
    """``log f_k(lam)``, finite for large ``lam`` where ``e^lam`` overflows."""
    if lam < 700:
        return math.log(f_k(k, lam))
    head = sum(lam**i / math.factorial(i) for i in range(k))
    return lam + math.log1p(-math.exp(math.log(head) - lam)) if k else lam


@dataclass(frozen=True)
class TruncPoisson:
    """Poisson(``lam``) conditioned on being at least 2."""

    lam: float

    @property
    def f1(self):
        return f_k(1, self.lam)

    @property
    def f2(self):
        return f_k(2, self.lam)

    @property
    def mean(self):
        return self.lam * self.f1 / self.f2

    @property
    def variance(self):
        lam = self.lam
        return (lam * (math.expm1(lam)) ** 2 - lam**3 * math.exp(lam)) / self.f2**2

    def pmf(self, t):
        if t < 2:
            return 0.0
        return math.exp(t * math.log(self.lam) - math.lgamma(t + 1) - log_f_k(2, self.lam))

    def pmf_table(self, tmax):
        return [self.pmf(t) for t in range(tmax + 1)]


def _mean_ratio(lam):
    return lam * f_k(1, lam) / f_k(2, lam)


def solve_lambda(ratio):
    """``lam`` with ``lam f_1(lam) / f_2(lam) = ratio`` (requires ``ratio > 2``)."""
    if not ratio > 2:
        raise ValueError("truncated Poisson mean exceeds 2; need ratio > 2")
    hi = max(1.0, float(ratio))
    while _mean_ratio(hi) < ratio:
        hi *= 2
    # the mean tends to 2 as lam -> 0
    lo = min(1e-6, hi / 2)
    while _mean_ratio(lo) > ratio:
        lo /= 16
    return TruncPoisson(bisect(lambda t: _mean_ratio(t) - ratio, lo, hi))


# -- localization radius -----------------------------------------------------

class UndefinedRadius(ValueError):
    """``8 e^3 c e^{-c/4} >= 1``: c is too small for the localization radius."""


def k1_ratio(c):
    return math.exp(3) * 8 * c * math.exp(-c / 4)


def k1_of(eps, c):
    """Smallest positive ``k1`` with ``sum_{k >= k1-1} r^k < eps/3``.

    ``r = 8 e^3 c e^{-c/4}``; the geometric tail is ``r^{k1-1} / (1 - r)``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    r = k1_ratio(c)
    if r >= 1:
        raise UndefinedRadius(f"c={c} too small: 8e^3 c e^(-c/4) = {r:.4g} >= 1")
    k1 = 1
    while r ** (k1 - 1) / (1 - r) >= eps / 3:
        k1 += 1
    return k1


def k1_bound(eps, c):
    """Large-c comparator ``(2/c) log(1/eps)`` for ``k1``; report only."""
    return 2 / c * math.log(1 / eps)


# -- rooted-tree local-limit weight ------------------------------------------

def log_rho_tree(k, aut, N, M, lam, variant="exp"):
    """Log of the closed-form rooted-tree weight ``rho_{H,o_H}``.

    ``rho = (N/2M)^{k-1} lam^{2k-2} e^{k lam} / (aut f_2(lam)^k)`` for a
    ``k``-vertex tree.  It is not normalized: values above 1 occur.
    ``variant="exp"`` uses ``e^{k lam}`` in the numerator, ``variant="f2"``
    uses ``f_2(k lam)``.
    """
    if k < 1 or aut < 1:
        raise ValueError("need k >= 1 and aut >= 1")
    if variant == "exp":
        top = k * lam
    elif variant == "f2":
        top = log_f_k(2, k * lam)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return (
        -math.log(aut)
        + (k - 1) * math.log(N / (2 * M))
        + (2 * k - 2) * math.log(lam)
        + top
        - k * log_f_k(2, lam)
    )


def rho_tree(k, aut, N, M, lam, variant="exp"):
    return math.exp(log_rho_tree(k, aut, N, M, lam, variant))
