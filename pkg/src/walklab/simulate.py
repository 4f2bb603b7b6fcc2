"""Event-driven Monte Carlo for walks on finite Cayley graphs, free
products, and rays: trajectory simulation, speed estimation, occupation-time
sampling, and stochastic-dominance testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import _kernels
from .errors import ConfigError
from .groups import CayleyGraph, FiniteGroup, GeneratorSet, RateAssignment
from .ray import RayRates

_MIN_CHUNK = 1024
_MAX_CHUNK = 4_000_000


# ---------------------------------------------------------------------------
# free products


class FreeProductGroup:
    """Free product of finite factors, elements in syllable normal form.

    A word is a tuple of syllables (factor_id, element_index) with adjacent
    factor ids distinct and no identity elements; its distance from the
    identity is the sum of the factors' Cayley distances of the syllables.
    """

    def __init__(self, factors: list[tuple[FiniteGroup, GeneratorSet]]):
        if len(factors) < 2:
            raise ValueError("a free product needs at least two factors")
        self.factors = tuple(factors)
        nmax = max(g.order for g, _ in factors)
        nf = len(factors)
        self.mult = np.zeros((nf, nmax, nmax), dtype=np.int32)
        self.fdist = np.zeros((nf, nmax), dtype=np.int32)
        labels: list[str] = []
        gen_fac: list[int] = []
        gen_el: list[int] = []
        inverse_label: dict[str, str] = {}
        for fid, (grp, gens) in enumerate(factors):
            self.mult[fid, : grp.order, : grp.order] = grp.mult
            from .groups import cayley_graph

            cg = cayley_graph(grp, gens)
            self.fdist[fid, : grp.order] = cg.dist
            for lab, e in zip(gens.labels, gens.elems):
                full = f"f{fid}:{lab}"
                labels.append(full)
                gen_fac.append(fid)
                gen_el.append(e)
                inverse_label[full] = f"f{fid}:{gens.inverse_label[lab]}"
        self.labels = tuple(labels)
        self.gen_fac = np.array(gen_fac, dtype=np.int32)
        self.gen_el = np.array(gen_el, dtype=np.int32)
        self.inverse_label = inverse_label

    def distance(self, word) -> int:
        return int(sum(self.fdist[f, e] for f, e in word))

    def default_rates(self, per_label: dict[str, float]) -> RateAssignment:
        return RateAssignment(dict(per_label))


def multiply_normal_form(g: FreeProductGroup, word, syllable):
    """Right-multiply a normal-form word by one factor syllable."""
    fid, e = syllable
    if e == 0:
        raise ValueError("identity syllables are not allowed")
    word = tuple(word)
    if word and word[-1][0] == fid:
        new = int(g.mult[fid, word[-1][1], e])
        if new == 0:
            return word[:-1]
        return word[:-1] + ((fid, new),)
    return word + ((fid, int(e)),)


# ---------------------------------------------------------------------------
# configuration and results


@dataclass(frozen=True)
class SimConfig:
    horizon: float = 2000.0
    replicas: int = 200
    seed: int = 0
    mode: str = "direct"  # or "refresh"

    def __post_init__(self):
        if self.horizon <= 0:
            raise ConfigError("horizon must be positive")
        if self.replicas < 1:
            raise ConfigError("replica count must be at least 1")
        if self.mode not in ("direct", "refresh"):
            raise ConfigError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class TrajectorySummary:
    endpoint: object
    distance: float
    events: int
    occupation: dict = field(default=None, hash=False)


@dataclass(frozen=True)
class SpeedEstimate:
    mean: float
    se: float
    replicas: int
    horizon: float

    def interval(self, width: float = 4.0) -> tuple[float, float]:
        return self.mean - width * self.se, self.mean + width * self.se


def _replica_rng(seed: int, replica: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, replica], dtype=np.uint64))
    )


def _chunk_size(clock: float, remaining: float) -> int:
    mean = clock * remaining
    n = int(mean * 1.05 + 6.0 * math.sqrt(mean + 1.0) + 64)
    return max(_MIN_CHUNK, min(n, _MAX_CHUNK))


def _rate_vector(rates: RateAssignment, labels) -> np.ndarray:
    vec = np.array([rates[lab] for lab in labels], dtype=float)
    if vec.sum() <= 0:
        raise ConfigError("total rate must be positive")
    return vec


_EMPTY = np.empty(0, dtype=np.float64)


def _run_finite(cg, vec, cfg, replica, track_states):
    rng = _replica_rng(cfg.seed, replica)
    total = float(vec.sum())
    clock = 2.0 * total if cfg.mode == "refresh" else total
    cum = np.cumsum(vec) / total
    refresh = cfg.mode == "refresh"
    occ = np.zeros(cg.n) if track_states is not None else _EMPTY
    x, t, ev = 0, 0.0, 0
    while True:
        m = _chunk_size(clock, cfg.horizon - t)
        exps = rng.exponential(size=m)
        us = rng.random(size=m)
        coins = rng.random(size=m) if refresh else np.empty(m)
        x, t, ev, _, done = _kernels.finite_walk(
            cg.nxt, cum, x, t, ev, cfg.horizon, clock, exps, us, coins, refresh, occ
        )
        if done:
            break
    occupation = None
    if track_states is not None:
        occupation = {s: float(occ[s]) for s in track_states}
    return TrajectorySummary(int(x), float(cg.dist[x]), int(ev), occupation)


def _run_free(fp, vec, cfg, replica):
    rng = _replica_rng(cfg.seed, replica)
    total = float(vec.sum())
    clock = 2.0 * total if cfg.mode == "refresh" else total
    cum = np.cumsum(vec) / total
    refresh = cfg.mode == "refresh"
    cap = _chunk_size(clock, cfg.horizon) + 8
    syl_f = np.zeros(cap, dtype=np.int32)
    syl_e = np.zeros(cap, dtype=np.int32)
    depth, word_dist, t, ev = 0, 0, 0.0, 0
    while True:
        m = _chunk_size(clock, cfg.horizon - t)
        if depth + m + 8 > len(syl_f):
            syl_f = np.concatenate([syl_f, np.zeros(m + 8, dtype=np.int32)])
            syl_e = np.concatenate([syl_e, np.zeros(m + 8, dtype=np.int32)])
        exps = rng.exponential(size=m)
        us = rng.random(size=m)
        coins = rng.random(size=m)
        depth, word_dist, t, ev, _, done = _kernels.free_product_walk(
            fp.mult, fp.fdist, fp.gen_fac, fp.gen_el, cum,
            syl_f, syl_e, depth, word_dist, t, ev, cfg.horizon, clock,
            exps, us, coins, refresh,
        )
        if done:
            break
    word = tuple((int(syl_f[i]), int(syl_e[i])) for i in range(depth))
    return TrajectorySummary(word, float(word_dist), int(ev), None)


def _run_ray(rr: RayRates, cfg, replica, track_states):
    rng = _replica_rng(cfg.seed, replica)
    maxr = rr.max_rate()
    if maxr <= 0:
        raise ConfigError("total rate must be positive")
    clock = (2.0 if cfg.mode == "refresh" else 1.0) * 2.0 * maxr
    refresh = cfg.mode == "refresh"
    x, t, ev = 0, 0.0, 0
    n_edges = _chunk_size(clock, cfg.horizon) + 8
    if track_states:
        n_edges = max(n_edges, max(track_states) + 2)
    rates = rr.truncated(n_edges)
    occ = np.zeros(len(rates) + 1) if track_states is not None else _EMPTY
    while True:
        m = _chunk_size(clock, cfg.horizon - t)
        if x + m + 2 > len(rates):
            rates = rr.truncated(x + m + 2)
        if track_states is not None and len(rates) + 1 > len(occ):
            grown = np.zeros(len(rates) + 1)
            grown[: len(occ)] = occ
            occ = grown
        exps = rng.exponential(size=m)
        us = rng.random(size=m)
        coins = rng.random(size=m)
        x, t, ev, _, done = _kernels.ray_walk(
            rates, x, t, ev, cfg.horizon, exps, us, coins, refresh, occ
        )
        if done:
            break
    occupation = None
    if track_states is not None:
        occupation = {s: float(occ[s]) if s < len(occ) else 0.0 for s in track_states}
    return TrajectorySummary(int(x), float(x), int(ev), occupation)


def simulate_walk(space, rates, cfg: SimConfig, track_states=None):
    """One trajectory summary per replica; deterministic given seed."""
    if isinstance(space, CayleyGraph):
        rates.validate(space.gens)
        vec = _rate_vector(rates, space.gens.labels)
        return [
            _run_finite(space, vec, cfg, rep, track_states)
            for rep in range(cfg.replicas)
        ]
    if isinstance(space, FreeProductGroup):
        for lab in space.labels:
            if rates[lab] != rates[space.inverse_label[lab]]:
                raise ValueError(f"rates of {lab!r} and its inverse differ")
        vec = _rate_vector(rates, space.labels)
        if track_states is not None:
            raise ConfigError("occupation tracking is not supported on free products")
        return [_run_free(space, vec, cfg, rep) for rep in range(cfg.replicas)]
    if isinstance(space, RayRates):
        return [_run_ray(space, cfg, rep, track_states) for rep in range(cfg.replicas)]
    raise ConfigError(f"unsupported space type {type(space).__name__}")


def speed_mc(space, rates, cfg: SimConfig) -> SpeedEstimate:
    """Mean and standard error of |Z_T| / T over replicas."""
    runs = simulate_walk(space, rates, cfg)
    speeds = np.array([r.distance for r in runs]) / cfg.horizon
    se = float(speeds.std(ddof=1) / math.sqrt(len(speeds))) if len(speeds) > 1 else 0.0
    return SpeedEstimate(float(speeds.mean()), se, cfg.replicas, cfg.horizon)


def occupation_samples(space, rates, states, t, replicas, seed, mode="direct"):
    """Independent samples of the time spent at each requested state up to t."""
    cfg = SimConfig(horizon=t, replicas=replicas, seed=seed, mode=mode)
    runs = simulate_walk(space, rates, cfg, track_states=tuple(states))
    return {s: np.array([r.occupation[s] for r in runs]) for s in states}


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class DominanceResult:
    verdict: str  # Dominates | Crosses | Inconclusive
    max_violation: float  # max over x of CDF_A(x) - CDF_B(x)
    band: float


def dominance_test(samples_a, samples_b, level: float = 0.01) -> DominanceResult:
    """One-sided empirical-CDF comparison: does A stochastically dominate B?

    Uses a Dvoretzky-Kiefer-Wolfowitz band for each sample at the given
    level; A Dominates when CDF_A <= CDF_B + band everywhere, Crosses when
    the violation exceeds the band in both directions.
    """
    a = np.sort(np.asarray(samples_a, dtype=float))
    b = np.sort(np.asarray(samples_b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("sample sets must be nonempty")
    band = math.sqrt(math.log(2.0 / level) / (2.0 * len(a))) + math.sqrt(
        math.log(2.0 / level) / (2.0 * len(b))
    )
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / len(a)
    cdf_b = np.searchsorted(b, grid, side="right") / len(b)
    viol_ab = float(np.max(cdf_a - cdf_b))  # A fails to dominate where > 0
    viol_ba = float(np.max(cdf_b - cdf_a))
    if viol_ab <= band:
        verdict = "Dominates"
    elif viol_ba > band:
        verdict = "Crosses"
    else:
        verdict = "Inconclusive"
    return DominanceResult(verdict, viol_ab, band)


def endpoint_chi_square(runs_a, runs_b, n_states: int) -> float:
    """p-value of a two-sample chi-square test on endpoint histograms."""
    ca = np.bincount([r.endpoint for r in runs_a], minlength=n_states).astype(float)
    cb = np.bincount([r.endpoint for r in runs_b], minlength=n_states).astype(float)
    keep = (ca + cb) > 0
    ca, cb = ca[keep], cb[keep]
    na, nb = ca.sum(), cb.sum()
    pooled = (ca + cb) / (na + nb)
    ea, eb = na * pooled, nb * pooled
    stat = float(((ca - ea) ** 2 / ea).sum() + ((cb - eb) ** 2 / eb).sum())
    dof = keep.sum() - 1
    return float(stats.chi2.sf(stat, dof))
