"""Walks on the nonnegative-integer ray and on two-sided integer windows:
exact profiles, rate sensitivity, the hitting-time spectral representation,
and the two-sided expected-distance regime experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .ctmc import (
    DEFAULT_TOL,
    LAMBDA_SLACK,
    Distribution,
    RateGraph,
    _poisson_weights,
    hitting_laplace,
    transition_distribution,
)
from .errors import ToleranceUnachievable


@dataclass(frozen=True)
class RayRates:
    """Edge rates on the ray: rates[i-1] is the rate of edge (i-1, i).

    `extend` continues the sequence beyond the stored prefix (None means
    rate zero beyond it, i.e. a finitely supported chain).
    """

    rates: tuple[float, ...]
    extend: float | None = None

    def __post_init__(self):
        if any(r < 0 for r in self.rates):
            raise ValueError("negative rate")
        if self.extend is not None and self.extend < 0:
            raise ValueError("negative extension rate")

    @classmethod
    def constant(cls, r: float) -> "RayRates":
        return cls((r,), extend=r)

    def rate(self, i: int) -> float:
        """Rate of edge (i-1, i), 1-indexed as usual for rays."""
        if i < 1:
            raise IndexError("edges are indexed from 1")
        if i <= len(self.rates):
            return self.rates[i - 1]
        return self.extend if self.extend is not None else 0.0

    @property
    def i0(self) -> float:
        """First edge index with zero rate (inf if none)."""
        for i, r in enumerate(self.rates, start=1):
            if r == 0.0:
                return i
        if self.extend is None or self.extend == 0.0:
            return len(self.rates) + 1
        return math.inf

    def max_rate(self) -> float:
        vals = list(self.rates) + ([self.extend] if self.extend else [])
        return max(vals) if vals else 0.0

    def truncated(self, n_edges: int) -> np.ndarray:
        return np.array([self.rate(i) for i in range(1, n_edges + 1)])

    def perturbed(self, j: int, delta: float) -> "RayRates":
        """Copy with rate r_j increased by delta (materializing edge j)."""
        m = max(len(self.rates), j)
        vals = [self.rate(i) for i in range(1, m + 1)]
        vals[j - 1] += delta
        return RayRates(tuple(vals), extend=self.extend)


@dataclass(frozen=True)
class LineRates:
    """Two-sided rates: rate(i) for the edge (i-1, i), i integer, on a
    window of states [-k, m]."""

    left: int  # number of edges to the left of 0 (edges 0, -1, ..., -left+1)
    rates: dict = field(hash=False)  # edge index -> rate

    def rate(self, i: int) -> float:
        return self.rates.get(i, 0.0)

    def to_rate_graph(self) -> tuple[RateGraph, int]:
        """Dense path graph; returns (graph, index offset of state 0)."""
        idxs = sorted(self.rates)
        lo = min(idxs) - 1
        hi = max(idxs)
        n = hi - lo + 1
        edges = tuple(
            (i - 1 - lo, i - lo, float(self.rates[i])) for i in idxs
        )
        return RateGraph(n, edges), -lo


@dataclass(frozen=True)
class KMSpectrum:
    """Positive eigenvalues of the killed tridiagonal Laplacian, ascending."""

    eigenvalues: np.ndarray = field(hash=False)

    def laplace_product(self, theta: float) -> float:
        """prod lambda_i / (lambda_i + theta): Laplace transform of the
        hitting time as a sum of independent exponentials."""
        lam = self.eigenvalues
        return float(np.prod(lam / (lam + theta)))


def _ray_graph(rates: RayRates, n_states: int) -> RateGraph:
    return RateGraph.path(rates.truncated(n_states - 1))


def ray_distribution(
    rates: RayRates, t: float, tol: float = DEFAULT_TOL, lam: float | None = None
) -> Distribution:
    """p_t(0, .) on an auto-extended truncation of the ray."""
    if rates.extend is None or rates.extend == 0.0:
        # finitely supported: mass cannot pass the first zero edge
        n_states = len(rates.rates) + 1
        zero = [i for i, r in enumerate(rates.rates, start=1) if r == 0.0]
        if zero:
            n_states = zero[0]
        p = transition_distribution(_ray_graph(rates, max(n_states, 2)), 0, t, tol, lam=lam)
        return p
    n_states = max(4 * math.ceil(t * rates.max_rate()), len(rates.rates) + 5, 8)
    for _ in range(40):
        p = transition_distribution(_ray_graph(rates, n_states), 0, t, tol, lam=lam)
        if p[len(p) - 1] < tol:
            return p
        n_states *= 2
    raise ToleranceUnachievable("ray truncation did not converge")


@dataclass
class ProfileReport:
    distribution: Distribution
    i0: float
    checked_range: int
    strictly_decreasing: bool
    min_relative_margin: float


# Strictness checks compare probabilities that can be genuinely tiny at the
# far end of the truncation.  The uniformized series has only nonnegative
# terms, so extending it far past the user tolerance keeps even tiny entries
# relatively accurate; the user tolerance still governs the truncation length.
_DEEP_TOL = 1e-60


def profile_checks(rates: RayRates, t: float, tol: float = DEFAULT_TOL) -> ProfileReport:
    """Strict profile decrease p_t(0, i-1) > p_t(0, i) for i < i0, with a
    relative margin of 1e-12 on the larger entry."""
    n_states = len(ray_distribution(rates, t, tol))
    d = transition_distribution(
        _ray_graph(rates, max(n_states, 2)), 0, t, min(tol, _DEEP_TOL)
    )
    hi = int(min(rates.i0, len(d)))
    ok = True
    min_margin = math.inf
    for i in range(1, hi):
        gap = d[i - 1] - d[i]
        rel = gap / d[i - 1] if d[i - 1] > 0 else -math.inf
        min_margin = min(min_margin, rel)
        if rel <= 1e-12:
            ok = False
    return ProfileReport(d, rates.i0, hi, ok, min_margin)


@dataclass
class SensitivityReport:
    cdf_delta: np.ndarray
    tail_relative_increase: np.ndarray  # per i < i0: relative growth of P[Z_t > i]
    expected_distance_delta: float
    cdf_strictly_decreases: bool
    expected_distance_strictly_increases: bool


def _difference_evolution(
    q0: np.ndarray, q1: np.ndarray, start: int, t: float, lam: float, tol: float
) -> np.ndarray:
    """p1_t - p0_t computed directly on the block system for (p0, p1 - p0).

    The difference vector never touches the O(1) entries of the marginals,
    so it stays relatively accurate even when it is many orders of magnitude
    below the probabilities themselves (a far perturbed edge at small t).
    """
    n = q0.shape[0]
    if lam == 0.0 or t == 0.0:
        return np.zeros(n)
    p0m = q0 / lam + np.eye(n)
    p1m = q1 / lam + np.eye(n)
    dq = (q1 - q0) / lam
    w = _poisson_weights(lam * t, tol)
    v = np.zeros(n)
    v[start] = 1.0
    d = np.zeros(n)
    out = np.zeros(n)
    for wk in w[1:]:
        d = d @ p1m + v @ dq
        v = v @ p0m
        out += wk * d
    return out


def rate_sensitivity(
    rates: RayRates, t: float, j: int, delta: float, tol: float = DEFAULT_TOL
) -> SensitivityReport:
    """Effect of r_j -> r_j + delta on the CDF and the expected distance.

    Both runs share the same truncation and uniformization rate, and the
    perturbation effect is evolved as its own vector, so the reported
    differences are free of discretization mismatch and cancellation.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    pert = rates.perturbed(j, delta)
    n_states = max(
        len(ray_distribution(rates, t, tol)),
        len(ray_distribution(pert, t, tol)),
        j + 2,
    )
    g0 = _ray_graph(rates, n_states)
    g1 = _ray_graph(pert, n_states)
    lam = LAMBDA_SLACK * max(
        float(np.max(g0.exit_rates())), float(np.max(g1.exit_rates()))
    )
    deep = min(tol, _DEEP_TOL)
    p0 = transition_distribution(g0, 0, t, deep, lam=lam).p
    d = _difference_evolution(
        g0.generator_matrix(), g1.generator_matrix(), 0, t, lam, deep
    )

    cdf_delta = np.cumsum(d)
    hi = int(min(rates.i0, n_states))

    # d sums to zero and changes sign once (mass drains from below edge j to
    # above it), so each tail difference P'[Z >= i] - P[Z >= i] has a
    # cancellation-free evaluation: minus the prefix sum below the sign
    # change, the suffix sum above it.  The accompanying absolute sums bound
    # the rounding error, giving a magnitude-scaled strictness margin.
    prefix = np.cumsum(d)
    prefix_abs = np.cumsum(np.abs(d))
    suffix = np.cumsum(d[::-1])[::-1]
    suffix_abs = np.cumsum(np.abs(d)[::-1])[::-1]
    idx_all = np.arange(1, n_states)
    use_prefix_all = idx_all <= j
    tail_diff_all = np.where(use_prefix_all, -prefix[idx_all - 1], suffix[idx_all])
    tail_scale_all = np.where(use_prefix_all, prefix_abs[idx_all - 1], suffix_abs[idx_all])
    tail_diff = tail_diff_all[: hi - 1]
    tail_scale = tail_scale_all[: hi - 1]

    e_delta = float(tail_diff_all.sum())
    tail0 = np.cumsum(p0[::-1])[::-1][1:hi]
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = tail_diff / np.where(tail0 > 0, tail0, 1.0)
    if delta == 0.0:
        strict_cdf = False
        strict_e = False
    else:
        strict_cdf = bool((tail_diff > 1e-12 * tail_scale).all())
        strict_e = e_delta > 1e-12 * float(tail_scale_all.max()) > 0.0
    return SensitivityReport(cdf_delta, rel, e_delta, strict_cdf, strict_e)


def km_spectrum(rates: RayRates, n: int) -> KMSpectrum:
    """Eigenvalues of the n x n killed Laplacian on states {0..n-1} with
    state n absorbing; these are the exponential rates of the hitting-time
    representation for reaching n from 0."""
    rs = rates.truncated(n)
    if (rs <= 0).any():
        raise ValueError("rates r_1..r_n must be positive")
    diag = np.empty(n)
    diag[0] = rs[0]
    for i in range(1, n):
        diag[i] = rs[i - 1] + rs[i]
    off = -rs[: n - 1] if n > 1 else np.array([])
    if n == 1:
        eig = diag.copy()
    else:
        eig = eigh_tridiagonal(diag, off, eigvals_only=True)
    return KMSpectrum(np.sort(eig))


@dataclass
class KMMonotonicityReport:
    base: np.ndarray
    perturbed: np.ndarray
    eigenvalues_weakly_increase: bool
    laplace_weakly_increases: bool


def km_monotonicity(
    rates: RayRates, n: int, j: int, delta: float, thetas=(0.1, 1.0, 10.0)
) -> KMMonotonicityReport:
    """Loewner-order consequence: each ascending eigenvalue weakly increases
    when any single rate is raised; the hitting-time Laplace transform
    weakly increases as well."""
    base = km_spectrum(rates, n)
    pert = km_spectrum(rates.perturbed(j, delta), n)
    eig_ok = bool((pert.eigenvalues >= base.eigenvalues - 1e-10).all())
    lap_ok = all(
        pert.laplace_product(th) >= base.laplace_product(th) - 1e-12 for th in thetas
    )
    return KMMonotonicityReport(base.eigenvalues, pert.eigenvalues, eig_ok, lap_ok)


def km_crosscheck(rates: RayRates, n: int, theta: float) -> tuple[float, float]:
    """Two independent computations of E[e^{-theta tau_n}]: the spectral
    product and exact first-step analysis."""
    spec = km_spectrum(rates, n)
    g = _ray_graph(rates, n + 1)
    return spec.laplace_product(theta), hitting_laplace(g, {n}, 0, theta)


# ---------------------------------------------------------------------------
# two-sided line experiments


def _tridiag_transition(rates: np.ndarray, start: int, t: float, tol: float) -> np.ndarray:
    """Uniformization specialized to a path graph: rates[i] on edge (i, i+1)."""
    n = len(rates) + 1
    exit = np.zeros(n)
    exit[:-1] += rates
    exit[1:] += rates
    lam = LAMBDA_SLACK * float(exit.max())
    v = np.zeros(n)
    v[start] = 1.0
    if lam == 0.0 or t == 0.0:
        return v
    r = rates / lam
    stay = 1.0 - exit / lam
    w = _poisson_weights(lam * t, tol)
    out = w[0] * v
    for wk in w[1:]:
        nv = stay * v
        nv[1:] += r * v[:-1]
        nv[:-1] += r * v[1:]
        v = nv
        out += wk * v
    return out


@dataclass
class LineScanReport:
    grid: np.ndarray
    p00_high: np.ndarray  # r_0 = 3
    p00_low: np.ndarray  # r_0 = 2
    violation_times: np.ndarray  # grid times where the larger r_0 has larger p00


def line_return_probability_scan(
    r0_low: float = 2.0,
    r0_high: float = 3.0,
    r1: float = 1.0,
    grid=None,
    tol: float = DEFAULT_TOL,
) -> LineScanReport:
    """Two-sided chain with only edges 0 and 1 active: scan t and report
    where raising r_0 from low to high raises p_t(0, 0)."""
    if grid is None:
        grid = np.arange(0.1, 5.0001, 0.1)
    grid = np.asarray(grid, dtype=float)

    def p00(r0, t):
        line = LineRates(1, {0: r0, 1: r1})
        g, off = line.to_rate_graph()
        return transition_distribution(g, off, t, tol)[off]

    hi = np.array([p00(r0_high, t) for t in grid])
    lo = np.array([p00(r0_low, t) for t in grid])
    return LineScanReport(grid, hi, lo, grid[hi > lo])


@dataclass
class RegimeReport:
    n: int
    k: int
    fast_rate: float
    t_small: float
    small_time_expected_distance: float
    large_time_expected_distance: float
    ratio: float
    small_time_formula: float  # (n-1)/2
    large_time_formula: float  # (n(n-1) + k(k+1)) / (2(n+k))


def regime_ratio_experiment(
    n: int = 200,
    k: int | None = None,
    fast_rate: float = 4.0e6,
    t_small: float = 0.01,
    tol: float = 1e-10,
) -> RegimeReport:
    """k unit-rate edges left of 0 and n-1 fast edges right of 0: compare
    the expected distance in the fast-mixed small-time regime against the
    fully mixed large-time limit (uniform over all n + k states)."""
    if k is None:
        k = round((math.sqrt(2.0) - 1.0) * n)
    # states -k .. n-1; edge i joins states i-1 and i
    rates = np.ones(n + k - 1)
    rates[k:] = fast_rate  # edges 1..n-1 (those right of state 0)
    dist_from_zero = np.abs(np.arange(-k, n))
    p_small = _tridiag_transition(rates, k, t_small, tol)
    e_small = float((p_small * dist_from_zero).sum())
    e_large = float(dist_from_zero.mean())  # uniform limit
    return RegimeReport(
        n,
        k,
        fast_rate,
        t_small,
        e_small,
        e_large,
        e_small / e_large,
        (n - 1) / 2.0,
        (n * (n - 1) + k * (k + 1)) / (2.0 * (n + k)),
    )


@dataclass
class LineExperimentsReport:
    scan: LineScanReport
    regime: RegimeReport


def line_experiments(
    n: int = 200, k: int | None = None, grid=None, tol: float = DEFAULT_TOL
) -> LineExperimentsReport:
    """The two documented two-sided-line experiments."""
    return LineExperimentsReport(
        line_return_probability_scan(grid=grid, tol=tol),
        regime_ratio_experiment(n=n, k=k),
    )
