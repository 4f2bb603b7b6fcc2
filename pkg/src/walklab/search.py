"""Randomized search for rate-monotonicity counterexamples on finite
groups, plus the fixed catalogue of documented negative and positive
examples.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .ctmc import (
    LAMBDA_SLACK,
    RateGraph,
    lp_distance_to_uniform,
    majorizes,
    transition_distribution,
)
from .errors import BudgetExhausted, NotGenerating
from .groups import (
    FiniteGroup,
    GeneratorSet,
    RateAssignment,
    builtin_group,
    cayley_graph,
)

DELTA_FLOOR = 1e-10  # metric changes below this are treated as zero


def _entropy(p: np.ndarray) -> float:
    q = p[p > 0]
    return float(-(q * np.log(q)).sum())


def _distributions_shared_clock(cg, rates, pert, t, tol=1e-12):
    """Base and perturbed distributions computed with one shared
    uniformization rate, so their difference is clean to ~1e-13."""
    g0 = RateGraph.from_cayley(cg, rates)
    g1 = RateGraph.from_cayley(cg, pert)
    lam = LAMBDA_SLACK * max(
        float(np.max(g0.exit_rates())), float(np.max(g1.exit_rates()))
    )
    p0 = transition_distribution(g0, 0, t, tol, lam=lam).p
    p1 = transition_distribution(g1, 0, t, tol, lam=lam).p
    return p0, p1


def perturb_metric_delta(
    group: FiniteGroup,
    gens: GeneratorSet,
    rates: RateAssignment,
    s: str,
    delta: float,
    t: float,
    p: float,
) -> tuple[float, float]:
    """(change in the l^p distance to uniform, change in entropy) when the
    rate of generator s (and of its inverse) is raised by delta."""
    rates.validate(gens)
    cg = cayley_graph(group, gens)
    pert = rates.perturbed(gens, s, delta)
    p0, p1 = _distributions_shared_clock(cg, rates, pert, t)
    lp_delta = lp_distance_to_uniform(p1, p) - lp_distance_to_uniform(p0, p)
    return float(lp_delta), _entropy(p1) - _entropy(p0)


@dataclass(frozen=True)
class SearchConfig:
    family: str = "dihedral"
    n_range: tuple[int, int] = (5, 12)
    n_generators: int = 4
    rate_range: tuple[float, float] = (1.0, 10.0)
    t_range: tuple[float, float] = (0.05, 10.0)
    deltas: tuple[float, ...] = (0.5, 1.0)
    p_grid: tuple[float, ...] = (1.0, 1.2, 1.4, 1.7, 2.0, 2.5, 3.0, 4.0, 6.0, math.inf)
    budget: int = 10_000
    seed: int = 0
    stop_after: int | None = None  # stop once this many examples are found
    allow_degenerate: bool = False  # permit duplicate generators (no identity ever)

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if any(p < 1 for p in self.p_grid):
            raise ValueError("p-grid must lie in [1, inf]")


@dataclass
class FoundExample:
    family: str
    n: int
    generator_labels: tuple
    generator_elements: tuple  # element indices in the builtin group
    rates: dict
    t: float
    perturbed_label: str
    delta: float
    p_deltas: dict  # p -> signed l^p delta
    entropy_delta: float
    sample_index: int
    seed: int

    def to_json(self) -> str:
        d = asdict(self)
        d["p_deltas"] = {str(k): v for k, v in self.p_deltas.items()}
        return json.dumps(d)

    @classmethod
    def from_json(cls, line: str) -> "FoundExample":
        d = json.loads(line)
        d["generator_labels"] = tuple(d["generator_labels"])
        d["generator_elements"] = tuple(d["generator_elements"])
        d["p_deltas"] = {float(k): v for k, v in d["p_deltas"].items()}
        return cls(**d)


def _instance(example: FoundExample):
    group, _ = builtin_group(example.family, example.n)
    named = list(zip(example.generator_labels, example.generator_elements))
    gens = GeneratorSet.build(group, named)
    return group, gens, RateAssignment(dict(example.rates))


def reverify(example: FoundExample) -> bool:
    """Recompute every stored metric delta; must match bit-exactly."""
    group, gens, rates = _instance(example)
    for p, stored in example.p_deltas.items():
        lp, ent = perturb_metric_delta(
            group, gens, rates, example.perturbed_label, example.delta, example.t, p
        )
        if lp != stored:
            return False
    _, ent = perturb_metric_delta(
        group, gens, rates, example.perturbed_label, example.delta, example.t,
        next(iter(example.p_deltas)),
    )
    return ent == example.entropy_delta


def _sample_generators(group: FiniteGroup, rng, k: int, allow_degenerate: bool):
    """k random non-identity elements closed under inverse, or None."""
    for _ in range(200):
        chosen: list[int] = []
        ok = True
        while len(chosen) < k:
            e = int(rng.integers(1, group.order))
            inv = int(group.inv[e])
            if e in chosen and not allow_degenerate:
                ok = False
                break
            pair = [e] if inv == e else [e, inv]
            if len(chosen) + len(pair) > k:
                ok = False
                break
            chosen.extend(pair)
        if not ok:
            continue
        named = [(f"g{i}", e) for i, e in enumerate(chosen)]
        try:
            if allow_degenerate:
                inv_label = {}
                for lab, e in named:
                    for lab2, e2 in named:
                        if group.inv[e] == e2 and lab2 not in inv_label.values():
                            inv_label[lab] = lab2
                            break
                gens = GeneratorSet(
                    tuple(lab for lab, _ in named),
                    tuple(e for _, e in named),
                    inv_label,
                )
            else:
                gens = GeneratorSet.build(group, named)
            cayley_graph(group, gens)  # raises NotGenerating
        except (NotGenerating, ValueError):
            continue
        return gens
    return None


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(math.isqrt(n)) + 1))


def random_search(cfg: SearchConfig) -> list[FoundExample]:
    """Sample (group, generators, rates, t, delta) configurations and record
    every instance where some l^p distance to uniform strictly increases.

    Deterministic given the seed: sample i uses its own counter-based
    stream keyed by (seed, i).
    """
    lo, hi = cfg.n_range
    sizes = list(range(lo, hi + 1))
    # dihedral searches favour prime orders, where examples are easier to find
    if cfg.family == "dihedral":
        sizes = sizes + 2 * [n for n in sizes if _is_prime(n)]
    found: list[FoundExample] = []
    for idx in range(cfg.budget):
        rng = np.random.Generator(
            np.random.Philox(key=np.array([cfg.seed, idx], dtype=np.uint64))
        )
        n = sizes[int(rng.integers(len(sizes)))]
        try:
            group, _ = builtin_group(cfg.family, n)
        except ValueError:
            continue
        gens = _sample_generators(group, rng, cfg.n_generators, cfg.allow_degenerate)
        if gens is None:
            continue
        rvals: dict[str, float] = {}
        for lab in gens.labels:
            inv = gens.inverse_label[lab]
            if inv in rvals:
                rvals[lab] = rvals[inv]
            else:
                rvals[lab] = float(rng.uniform(*cfg.rate_range))
        rates = RateAssignment(rvals)
        t = float(np.exp(rng.uniform(np.log(cfg.t_range[0]), np.log(cfg.t_range[1]))))
        delta = float(cfg.deltas[int(rng.integers(len(cfg.deltas)))])
        cg = cayley_graph(group, gens)
        seen_pairs = set()
        for lab in gens.labels:
            pair = frozenset((lab, gens.inverse_label[lab]))
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            pert = rates.perturbed(gens, lab, delta)
            p0, p1 = _distributions_shared_clock(cg, rates, pert, t)
            p_deltas = {
                p: float(lp_distance_to_uniform(p1, p) - lp_distance_to_uniform(p0, p))
                for p in cfg.p_grid
            }
            if max(p_deltas.values()) <= DELTA_FLOOR:
                continue
            ex = FoundExample(
                cfg.family, n, gens.labels, gens.elems, rvals, t, lab, delta,
                p_deltas, _entropy(p1) - _entropy(p0), idx, cfg.seed,
            )
            found.append(ex)
            if cfg.stop_after is not None and len(found) >= cfg.stop_after:
                return found
    if cfg.stop_after is not None and len(found) < cfg.stop_after:
        raise BudgetExhausted(
            f"budget {cfg.budget} exhausted with {len(found)} example(s)", found
        )
    return found


def p_increase_interval(example: FoundExample, tol: float = 1e-3):
    """Intervals of finite p where the l^p delta of the stored instance is
    positive, endpoints refined by bisection to the given tolerance."""
    group, gens, rates = _instance(example)

    def f(p: float) -> float:
        lp, _ = perturb_metric_delta(
            group, gens, rates, example.perturbed_label, example.delta, example.t, p
        )
        return lp

    grid = sorted(p for p in example.p_deltas if math.isfinite(p))
    vals = {p: example.p_deltas[p] for p in grid}

    def refine(lo: float, hi: float, want_positive_at_hi: bool) -> float:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if (f(mid) > DELTA_FLOOR) == want_positive_at_hi:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    intervals = []
    start = None
    for a, b in zip(grid, grid[1:]):
        pa, pb = vals[a] > DELTA_FLOOR, vals[b] > DELTA_FLOOR
        if pa and start is None:
            start = a
        if not pa and pb:
            start = refine(a, b, True)
        elif pa and not pb:
            intervals.append((start if start is not None else a, refine(a, b, False)))
            start = None
    if start is not None:
        intervals.append((start, grid[-1]))
    elif vals[grid[0]] > DELTA_FLOOR and not intervals:
        intervals.append((grid[0], grid[0]))
    return intervals


# ---------------------------------------------------------------------------
# fixed catalogue


@dataclass
class CatalogReport:
    star_entropy_low: float  # mean entropy, special rate 10
    star_entropy_high: float  # mean entropy, special rate 20
    star_entropy_decreases: bool
    mod8_gap: float  # p_2(0,4) - p_2(0,3)
    mod8_inversion: bool
    mod2n_expected_distance: float  # at t = 0.05
    mod2n_limit: float  # 3/2 - 2/n
    mod2n_exceeds_limit: bool
    conjugacy_majorization_holds: bool

    def all_pass(self) -> bool:
        return (
            self.star_entropy_decreases
            and self.mod8_inversion
            and self.mod2n_exceeds_limit
            and self.conjugacy_majorization_holds
        )


def _star_mean_entropy(special_rate: float, t: float = 1.0, tol: float = 1e-12) -> float:
    edges = tuple((0, i, 1.0) for i in range(1, 5)) + ((0, 5, special_rate),)
    g = RateGraph(6, edges)
    ents = [
        _entropy(transition_distribution(g, x, t, tol).p) for x in range(6)
    ]
    return float(np.mean(ents))


def _cyclic_residue_index(group: FiniteGroup, n: int, r: int) -> int:
    from .groups import Permutation

    shift = Permutation(tuple((i + r) % n for i in range(n)))
    return group.elements.index(shift)


def _mod8_gap(t: float = 2.0) -> float:
    group, gens = builtin_group("cyclic", 8, steps=(1, 2, 3))
    cg = cayley_graph(group, gens)
    rates = RateAssignment({"+1": 0.05, "-1": 0.05, "+2": 1.0, "-2": 1.0,
                            "+3": 0.05, "-3": 0.05})
    p = transition_distribution(RateGraph.from_cayley(cg, rates), 0, t).p
    at4 = _cyclic_residue_index(group, 8, 4)
    at3 = _cyclic_residue_index(group, 8, 3)
    return float(p[at4] - p[at3])


def _mod2n_expected_distance(n: int = 10, t: float = 0.05) -> float:
    steps = (2,) + tuple(k for k in range(1, n) if k % 2 == 1)
    group, gens = builtin_group("cyclic", 2 * n, steps=steps)
    cg = cayley_graph(group, gens)
    rvals = {}
    for lab in gens.labels:
        rvals[lab] = 100.0 if lab in ("+2", "-2") else 0.01
    p = transition_distribution(RateGraph.from_cayley(cg, RateAssignment(rvals)), 0, t).p
    return float((p * cg.dist).sum())


def _conjugacy_class_check(t: float = 1.0, scale: float = 2.0) -> bool:
    """Scaling the rates of a full conjugacy class of generators (all
    transpositions of S_4) moves the distribution down in majorization."""
    group, _ = builtin_group("symmetric", 4)
    from .groups import Permutation

    named = []
    k = 0
    for i in range(4):
        for j in range(i + 1, 4):
            images = list(range(4))
            images[i], images[j] = j, i
            e = group.elements.index(Permutation(tuple(images)))
            named.append((f"t{k}", e))
            k += 1
    gens_all = GeneratorSet.build(group, named)
    cg = cayley_graph(group, gens_all)
    base = RateAssignment({lab: 1.0 for lab, _ in named})
    up = RateAssignment({lab: scale for lab, _ in named})
    d0 = transition_distribution(RateGraph.from_cayley(cg, base), 0, t)
    d1 = transition_distribution(RateGraph.from_cayley(cg, up), 0, t)
    verdict = majorizes(d0, d1)
    return verdict.holds()


def catalog_reproductions() -> CatalogReport:
    """Run the fixed catalogue of documented examples."""
    e10 = _star_mean_entropy(10.0)
    e20 = _star_mean_entropy(20.0)
    gap = _mod8_gap()
    ed = _mod2n_expected_distance()
    limit = 1.5 - 2.0 / 10
    return CatalogReport(
        e10, e20, e20 < e10,
        gap, gap > 0,
        ed, limit, ed > limit,
        _conjugacy_class_check(),
    )
