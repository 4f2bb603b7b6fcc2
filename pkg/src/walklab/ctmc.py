"""Exact continuous-time Markov chain computations on finite weighted graphs.

The workhorse is uniformization: p_t = sum_k Poisson(lambda t)(k) P^k delta
with P = I + Q/lambda, truncated when the Poisson tail drops below the
requested tolerance. This keeps every intermediate vector nonnegative and
gives a rigorous one-sided truncation bound.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import SingularSystem, ToleranceUnachievable
from .groups import CayleyGraph, RateAssignment

DEFAULT_TOL = 1e-12
LAMBDA_SLACK = 1.05  # uniformization rate = slack * max total exit rate
STRICT_MARGIN = 1e-9  # separates true strict inequalities from roundoff
MAX_TERMS = 20_000_000


@dataclass(frozen=True)
class RateGraph:
    """Symmetric edge-weighted graph; each undirected edge stored once."""

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        for i, j, r in self.edges:
            if i == j:
                raise ValueError("self-loops are not allowed")
            if r < 0:
                raise ValueError("negative rate")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError("edge endpoint out of range")

    @classmethod
    def from_cayley(cls, cg: CayleyGraph, rates: RateAssignment) -> "RateGraph":
        rates.validate(cg.gens)
        # Q(x, y) sums the rates of every generator taking x to y; rate
        # symmetry under inverses makes the totals symmetric.
        seen = {}
        for x in range(cg.n):
            for j, lab in enumerate(cg.gens.labels):
                y = int(cg.nxt[x, j])
                if x < y:
                    seen[(x, y)] = seen.get((x, y), 0.0) + rates[lab]
        edges = tuple((i, j, r) for (i, j), r in sorted(seen.items()))
        return cls(cg.n, edges)

    @classmethod
    def path(cls, rates) -> "RateGraph":
        """Ray segment 0..N with rates[i] on edge (i, i+1)."""
        edges = tuple((i, i + 1, float(r)) for i, r in enumerate(rates))
        return cls(len(rates) + 1, edges)

    def generator_matrix(self) -> np.ndarray:
        q = np.zeros((self.n, self.n))
        for i, j, r in self.edges:
            q[i, j] += r
            q[j, i] += r
        np.fill_diagonal(q, -q.sum(axis=1))
        return q

    def exit_rates(self) -> np.ndarray:
        out = np.zeros(self.n)
        for i, j, r in self.edges:
            out[i] += r
            out[j] += r
        return out


@dataclass(frozen=True)
class Distribution:
    """Probability vector over states."""

    p: np.ndarray = field(hash=False)
    tol: float = 1e-9

    def __post_init__(self):
        if (self.p < -self.tol).any():
            raise ValueError("negative probability entry")
        if abs(self.p.sum() - 1.0) > max(self.tol, 1e-9):
            raise ValueError(f"probabilities sum to {self.p.sum()}, not 1")

    def __getitem__(self, i: int) -> float:
        return float(self.p[i])

    def __len__(self) -> int:
        return len(self.p)

    @classmethod
    def point_mass(cls, n: int, i: int) -> "Distribution":
        p = np.zeros(n)
        p[i] = 1.0
        return cls(p)


class MajorizationOrder(enum.Enum):
    STRICTLY_MAJORIZES = "StrictlyMajorizes"
    WEAKLY_MAJORIZES = "WeaklyMajorizes"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class MajorizationVerdict:
    order: MajorizationOrder
    worst_margin: float  # most negative prefix-sum difference
    best_margin: float  # most positive prefix-sum difference

    def holds(self) -> bool:
        return self.order is not MajorizationOrder.INCOMPARABLE

    def strict(self) -> bool:
        return self.order is MajorizationOrder.STRICTLY_MAJORIZES


# ---------------------------------------------------------------------------
# uniformization core


def _poisson_weights(lam_t: float, tol: float):
    """Poisson pmf values w_0..w_K with tail mass below K bounded by tol."""
    if lam_t == 0.0:
        return np.array([1.0])
    k_hi = int(lam_t + 12.0 * math.sqrt(lam_t + 1.0) + 30.0)
    while True:
        if k_hi > MAX_TERMS:
            raise ToleranceUnachievable("Poisson truncation exceeds the term cap")
        ks = np.arange(k_hi + 1)
        w = np.exp(ks * math.log(lam_t) - lam_t - gammaln(ks + 1.0))
        # the float sum cannot resolve tails below ~1e-14; past the mode the
        # pmf decays at least geometrically with ratio lam_t/(k+1)
        rho = lam_t / (k_hi + 1.0)
        analytic_tail = w[-1] * rho / (1.0 - rho) if rho < 1.0 else math.inf
        tail = min(max(1.0 - w.sum(), 0.0), analytic_tail)
        if tail < tol:
            return w
        k_hi *= 2


def _uniformized(
    q: np.ndarray, start: int, t: float, tol: float, lam: float | None = None
) -> np.ndarray:
    """Poisson-mixture evaluation of exp(tQ) row `start`; Q may be sub-conservative."""
    n = q.shape[0]
    v = np.zeros(n)
    v[start] = 1.0
    max_exit = float(np.max(-np.diag(q))) if n else 0.0
    if lam is None:
        lam = LAMBDA_SLACK * max_exit
    elif lam < max_exit:
        raise ValueError("lambda override below the max exit rate")
    if lam == 0.0 or t == 0.0:
        return v
    p = q / lam + np.eye(n)
    w = _poisson_weights(lam * t, tol)
    out = w[0] * v
    for wk in w[1:]:
        v = v @ p
        out += wk * v
    return out


def transition_distribution(
    g: RateGraph, start: int, t: float, tol: float = DEFAULT_TOL, lam: float | None = None
) -> Distribution:
    """p_t(start, .) with total truncation error below tol."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not (0 < tol <= 1e-6):
        raise ValueError("tol must be in (0, 1e-6]")
    out = _uniformized(g.generator_matrix(), start, t, tol)
    return Distribution(out, tol=max(tol * 10, 1e-9))


def stationarity_metrics(d: Distribution, p: float = 2.0) -> dict:
    """Distances to uniform and entropy (natural log)."""
    n = len(d)
    dev = np.abs(d.p - 1.0 / n)
    if math.isinf(p):
        lp = float(dev.max())
    else:
        lp = float((dev**p).sum() ** (1.0 / p))
    pos = d.p[d.p > 0]
    entropy = float(-(pos * np.log(pos)).sum())
    hell = float(math.sqrt(0.5 * ((np.sqrt(d.p) - math.sqrt(1.0 / n)) ** 2).sum()))
    return {
        "lp_distance": lp,
        "linf": float(dev.max()),
        "entropy": entropy,
        "hellinger": hell,
    }


def lp_distance_to_uniform(p_vec: np.ndarray, p: float) -> float:
    n = len(p_vec)
    dev = np.abs(p_vec - 1.0 / n)
    if math.isinf(p):
        return float(dev.max())
    return float((dev**p).sum() ** (1.0 / p))


def majorizes(f: Distribution, g: Distribution, tol: float = DEFAULT_TOL) -> MajorizationVerdict:
    """Does f majorize g? Verdict from sorted prefix-sum margins."""
    if len(f) != len(g):
        raise ValueError("distributions have different lengths")
    fs = np.sort(f.p)[::-1].cumsum()
    gs = np.sort(g.p)[::-1].cumsum()
    diff = fs - gs
    worst = float(diff.min())
    best = float(diff.max())
    if worst < -tol:
        order = MajorizationOrder.INCOMPARABLE
    elif best > tol:
        order = MajorizationOrder.STRICTLY_MAJORIZES
    else:
        order = MajorizationOrder.WEAKLY_MAJORIZES
    return MajorizationVerdict(order, worst, best)


def refresh_operator(d: Distribution, pairing: np.ndarray) -> Distribution:
    """Average the mass over the orbit pairs of the involution x -> x*s."""
    pairing = np.asarray(pairing)
    if not (pairing[pairing] == np.arange(len(pairing))).all():
        raise ValueError("pairing is not an involution")
    return Distribution(0.5 * (d.p + d.p[pairing]), tol=d.tol)


def discrete_coin_distribution(cg: CayleyGraph, seq) -> Distribution:
    """Law of the fair-coin word walk: left-fold of refresh operators from delta_o."""
    d = Distribution.point_mass(cg.n, 0)
    for label in seq:
        d = refresh_operator(d, cg.pairing(label))
    return d


def timed_refresh_distribution(
    g: RateGraph, start: int, t: float, insertions, tol: float = DEFAULT_TOL
) -> Distribution:
    """Evolve, applying deterministic refresh operators at the insertion times."""
    times = [u for u, _ in insertions]
    if any(not (0 < u < t) for u in times) or any(
        a >= b for a, b in zip(times, times[1:])
    ):
        raise ValueError("insertion times must be strictly increasing in (0, t)")
    q = g.generator_matrix()
    v = np.zeros(g.n)
    v[start] = 1.0
    prev = 0.0
    for u, pairing in insertions:
        v = _evolve_vector(q, v, u - prev, tol)
        pairing = np.asarray(pairing)
        v = 0.5 * (v + v[pairing])
        prev = u
    v = _evolve_vector(q, v, t - prev, tol)
    return Distribution(v, tol=max(tol * 10, 1e-9))


def _evolve_vector(q: np.ndarray, v: np.ndarray, t: float, tol: float) -> np.ndarray:
    n = q.shape[0]
    lam = LAMBDA_SLACK * float(np.max(-np.diag(q)))
    if lam == 0.0 or t == 0.0:
        return v
    p = q / lam + np.eye(n)
    w = _poisson_weights(lam * t, tol)
    out = w[0] * v
    for wk in w[1:]:
        v = v @ p
        out += wk * v
    return out


def restricted_survival(
    g: RateGraph, forbidden, start: int, t: float, tol: float = DEFAULT_TOL
) -> np.ndarray:
    """P[Z_t = x, never entered `forbidden` before t], per allowed state x.

    Returned as a full-length vector that is zero on forbidden states; the
    missing mass is the probability of having hit the forbidden set.
    """
    forbidden = set(int(x) for x in forbidden)
    if start in forbidden:
        raise ValueError("start state is forbidden")
    q = g.generator_matrix()
    allowed = [i for i in range(g.n) if i not in forbidden]
    qa = q[np.ix_(allowed, allowed)].copy()
    # keep the original exit rates on the diagonal: mass flowing toward
    # forbidden states is killed rather than redistributed
    sub = _uniformized(qa, allowed.index(start), t, tol)
    out = np.zeros(g.n)
    out[allowed] = sub
    return out


def wall_crossing_cdf(
    g: RateGraph, crossing_edges, start: int, t: float, tol: float = DEFAULT_TOL
) -> float:
    """P[the first doubled-clock ring on any designated edge occurs before t].

    In the refresh representation each edge carries a rate-2r clock with a
    fair coin; a ring on a designated edge while the walker sits at either
    endpoint exposes it to both sides at once.  The time of the first such
    ring (not the first time the walker lands across) is the quantity that
    obeys the reflection identity: its CDF equals twice the mass on the far
    side of the edge set.  Computed by killing at rate 2r across the
    designated edges and keeping rate-r motion elsewhere.
    """
    keys = set()
    for e in crossing_edges:
        i, j = int(e[0]), int(e[1])
        keys.add((min(i, j), max(i, j)))
    q = np.zeros((g.n, g.n))
    kill = np.zeros(g.n)
    for i, j, r in g.edges:
        if (min(i, j), max(i, j)) in keys:
            kill[i] += 2.0 * r
            kill[j] += 2.0 * r
        else:
            q[i, j] += r
            q[j, i] += r
    np.fill_diagonal(q, -q.sum(axis=1) - kill)
    surv = _uniformized(q, start, t, tol)
    return float(1.0 - surv.sum())


def hitting_laplace(g: RateGraph, target, start: int, theta: float) -> float:
    """E[e^{-theta tau_target}] by first-step analysis."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    target = set(int(x) for x in target)
    if start in target:
        return 1.0
    # reachability over positive-rate edges
    adj = {i: [] for i in range(g.n)}
    for i, j, r in g.edges:
        if r > 0:
            adj[i].append(j)
            adj[j].append(i)
    seen = {start}
    stack = [start]
    reached = False
    while stack:
        x = stack.pop()
        if x in target:
            reached = True
            break
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if not reached:
        raise SingularSystem("target not reachable from start with positive rates")

    q = g.generator_matrix()
    free = [i for i in range(g.n) if i not in target]
    idx = {x: a for a, x in enumerate(free)}
    a_mat = theta * np.eye(len(free)) - q[np.ix_(free, free)]
    b = q[np.ix_(free, sorted(target))].sum(axis=1)
    try:
        u = np.linalg.solve(a_mat, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - theta>0 keeps it PD
        raise SingularSystem(str(exc)) from exc
    return float(u[idx[start]])


def expected_occupation(
    g: RateGraph, start: int, v: int, t: float, tol: float = DEFAULT_TOL
) -> float:
    """Integral of p_s(start, v) over s in [0, t], via the term-wise
    integrated uniformization series."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    q = g.generator_matrix()
    lam = LAMBDA_SLACK * float(np.max(-np.diag(q)))
    if lam == 0.0:
        return t if start == v else 0.0
    lam_t = lam * t
    # integral of the k-th Poisson weight over [0, t] is
    # P[Poisson(lam t) >= k+1] / lam; tail truncation via Cauchy-Schwarz:
    # residual <= sqrt(lam t (1 + lam t) P[N > K]) / lam
    target_tail = (tol * lam) ** 2 / (lam_t * (1.0 + lam_t))
    w = _poisson_weights(lam_t, min(target_tail, tol))
    surv = 1.0 - np.cumsum(w)  # surv[k] = P[N >= k+1], up to truncation
    p = q / lam + np.eye(g.n)
    vec = np.zeros(g.n)
    vec[start] = 1.0
    total = surv[0] * vec[v]
    for k in range(1, len(w)):
        vec = vec @ p
        total += max(surv[k], 0.0) * vec[v]
    return float(total / lam)
