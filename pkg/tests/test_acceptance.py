"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""

import itertools
import math

import numpy as np
import pytest

import walklab as wl
from walklab.ctmc import Distribution, RateGraph
from walklab.search import _distributions_shared_clock, _star_mean_entropy
from walklab.simulate import FreeProductGroup


def _report(capsys, n, ok, detail=""):
    with capsys.disabled():
        tag = "PASS" if ok else "FAIL"
        line = f"ACCEPTANCE {n} {tag}"
        if detail:
            line += f" ({detail})"
        print(line, flush=True)


def _coxeter_cases():
    return [
        ("I2(5)", wl.dihedral_matrix(5)),
        ("I2(7)", wl.dihedral_matrix(7)),
        ("A3", wl.type_a_matrix(3)),
        ("B3", wl.type_b_matrix(3)),
    ]


def test_acceptance_01_star_entropy(capsys):
    e10 = _star_mean_entropy(10.0)
    e20 = _star_mean_entropy(20.0)
    ok = (
        abs(e10 - 1.626355024) < 1e-8
        and abs(e20 - 1.626293845) < 1e-8
        and e20 < e10
    )
    _report(capsys, 1, ok, f"e10={e10:.9f} e20={e20:.9f}")
    assert ok


def test_acceptance_02_tree_speed(capsys):
    agree = all(
        abs(wl.tree_speed_closed_form(rho) - wl.free_coxeter_speed((rho, 1.0, 1.0)).speed) < 1e-9
        for rho in (0.25, 0.5, 1.0, 2.0, 4.0)
    )
    at_one = (
        abs(wl.tree_speed_closed_form(1.0) - 1.0) < 1e-9
        and abs(wl.free_coxeter_speed((1.0, 1.0, 1.0)).speed - 1.0) < 1e-9
    )
    z2 = wl.builtin_group("cyclic", 2)
    fp = FreeProductGroup([z2, z2, z2])
    rates = wl.RateAssignment({lab: 1.0 for lab in fp.labels})
    est = wl.speed_mc(fp, rates, wl.SimConfig(horizon=2000.0, replicas=200, seed=0))
    covers = abs(est.mean - 1.0) <= 4.0 * est.se
    ok = agree and at_one and covers
    _report(capsys, 2, ok, f"mc={est.mean:.4f}+-{est.se:.4f}")
    assert ok


def test_acceptance_03_coxeter_exact_monotonicity(capsys):
    rng = np.random.default_rng(0)
    bruhat_ok = True
    major_ok = True
    for _, matrix in _coxeter_cases():
        real = wl.coxeter_group(matrix)
        cg = real.cayley
        labels = cg.gens.labels
        bo = wl.bruhat_order(real)
        pairs = list(bo.strict_pairs())
        for _ in range(20):
            # the rate window keeps every Bruhat margin resolvable above 1e-9
            # at both t = 0.1 (deep pairs) and t = 10 (near-uniformity)
            rates = wl.RateAssignment(
                {lab: float(rng.uniform(2.4, 2.7)) for lab in labels}
            )
            g = RateGraph.from_cayley(cg, rates)
            for t in (0.1, 1.0, 10.0):
                d = wl.transition_distribution(g, 0, t)
                for x, y in pairs:
                    if not (d[x] > d[y] + 1e-9):
                        bruhat_ok = False
                for lab in labels:
                    for delta in (0.1, 1.0):
                        pert = rates.perturbed(cg.gens, lab, delta)
                        p0, p1 = _distributions_shared_clock(cg, rates, pert, t)
                        v = wl.majorizes(Distribution(p0), Distribution(p1))
                        if not v.strict():
                            major_ok = False
    ok = bruhat_ok and major_ok
    _report(capsys, 3, ok, f"bruhat={bruhat_ok} majorization={major_ok}")
    assert ok


def test_acceptance_04_discrete_majorization(capsys):
    real = wl.coxeter_group(wl.type_a_matrix(3))
    cg = real.cayley
    labels = list(cg.gens.labels)
    rng = np.random.default_rng(1)
    ok = True
    strict_count = 0
    for _ in range(100):
        length = int(rng.integers(1, 11))
        seq = [labels[int(rng.integers(len(labels)))] for _ in range(length)]
        while True:
            keep = rng.random(length) < 0.7
            if keep.sum() < length:
                break
        sub = [s for s, k in zip(seq, keep) if k]
        d_full = wl.discrete_coin_distribution(cg, seq)
        d_sub = wl.discrete_coin_distribution(cg, sub)
        v = wl.majorizes(d_sub, d_full, tol=1e-12)
        if not v.holds():
            ok = False
        laws_differ = np.max(np.abs(np.sort(d_sub.p) - np.sort(d_full.p))) > 1e-12
        if laws_differ:
            if not v.strict():
                ok = False
            strict_count += 1
    ok = ok and strict_count > 0
    _report(capsys, 4, ok, f"strict_pairs={strict_count}/100")
    assert ok


def _random_small_group(rng):
    from walklab.search import _sample_generators

    while True:
        family, n = [
            ("cyclic", int(rng.integers(3, 61))),
            ("dihedral", int(rng.integers(3, 61))),
            ("dicyclic", int(rng.integers(2, 31))),
            ("symmetric", int(rng.integers(3, 6))),
        ][int(rng.integers(4))]
        group, _ = wl.builtin_group(family, n)
        if group.order > 120:
            continue
        gens = _sample_generators(group, rng, 4, allow_degenerate=False)
        if gens is None:
            continue
        return group, gens


def test_acceptance_05_l2_linf_monotone_and_identities(capsys):
    rng = np.random.default_rng(2)
    mono_ok = True
    ident_ok = True
    for _ in range(100):
        group, gens = _random_small_group(rng)
        cg = wl.cayley_graph(group, gens)
        n = cg.n
        rvals = {}
        for lab in gens.labels:
            inv = gens.inverse_label[lab]
            rvals[lab] = rvals.get(inv, float(rng.uniform(1.0, 10.0)))
        rates = wl.RateAssignment(rvals)
        g = RateGraph.from_cayley(cg, rates)
        for t in (0.2, 1.0, 5.0):
            d = wl.transition_distribution(g, 0, t)
            d2 = wl.transition_distribution(g, 0, 2 * t)
            linf = max(abs(p - 1.0 / n) for p in d.p)
            l2 = math.sqrt(sum((p - 1.0 / n) ** 2 for p in d.p))
            if abs(linf - (d[0] - 1.0 / n)) > 1e-10:
                ident_ok = False
            if abs(l2 * l2 - (d2[0] - 1.0 / n)) > 1e-10:
                ident_ok = False
            for lab in gens.labels:
                for p in (2.0, math.inf):
                    lp_delta, _ = wl.perturb_metric_delta(
                        group, gens, rates, lab, 0.1, t, p
                    )
                    if lp_delta > 1e-10:
                        mono_ok = False
    ok = mono_ok and ident_ok
    _report(capsys, 5, ok, f"monotone={mono_ok} identities={ident_ok}")
    assert ok


def test_acceptance_06_cyclic_negative_examples(capsys):
    rep = wl.catalog_reproductions()
    group, gens = wl.builtin_group("cyclic", 20, steps=(2, 1, 3, 5, 7, 9))
    cg = wl.cayley_graph(group, gens)
    limit = float(np.mean(cg.dist))
    ok = (
        rep.mod8_gap > 0
        and rep.mod2n_expected_distance > 1.3
        and abs(limit - 1.3) <= 0.01
    )
    _report(
        capsys, 6, ok,
        f"mod8_gap={rep.mod8_gap:.5f} E|Z|={rep.mod2n_expected_distance:.5f} limit={limit:.3f}",
    )
    assert ok


def _mod2n_free_product(odd_rate):
    n = 20
    z2 = wl.builtin_group("cyclic", 2)
    steps = (2,) + tuple(k for k in range(1, n) if k % 2 == 1)
    zn = wl.builtin_group("cyclic", 2 * n, steps=steps)
    fp = FreeProductGroup([z2, zn])
    rvals = {}
    for lab in fp.labels:
        if lab == "f0:+1":
            rvals[lab] = 1.0
        elif lab in ("f1:+2", "f1:-2"):
            rvals[lab] = 50.0
        else:
            rvals[lab] = float(odd_rate)
    return fp, wl.RateAssignment(rvals)


def test_acceptance_07_free_product_speed_drop(capsys):
    fp0, rates0 = _mod2n_free_product(0.0)
    fp1, rates1 = _mod2n_free_product(50.0)
    cfg = wl.SimConfig(horizon=1000.0, replicas=200, seed=0)
    est0 = wl.speed_mc(fp0, rates0, cfg)
    est1 = wl.speed_mc(fp1, rates1, cfg)
    gap = est0.mean - est1.mean
    separated = (est0.mean - 4 * est0.se) > (est1.mean + 4 * est1.se)
    ok = separated and gap > 0.3
    _report(
        capsys, 7, ok,
        f"gap={gap:.4f} (needs >0.3) speeds={est0.mean:.4f}+-{est0.se:.4f}"
        f"/{est1.mean:.4f}+-{est1.se:.4f} separated={separated}",
    )
    assert ok


def test_acceptance_08_ray_suite(capsys):
    rng = np.random.default_rng(3)
    ok = True
    for _ in range(50):
        rates = wl.RayRates(tuple(rng.uniform(0.2, 5.0, size=30)))
        j = int(rng.integers(1, 31))
        for t in (0.5, 2.0):
            prof = wl.profile_checks(rates, t)
            if not (prof.strictly_decreasing and prof.min_relative_margin > 1e-12):
                ok = False
            sens = wl.rate_sensitivity(rates, t, j, 0.1)
            if not (sens.cdf_strictly_decreases and sens.expected_distance_strictly_increases):
                ok = False
            if not (sens.tail_relative_increase > 0).all():
                ok = False
    _report(capsys, 8, ok)
    assert ok


def test_acceptance_09_hitting_time_spectrum(capsys):
    rng = np.random.default_rng(4)
    laplace_ok = True
    mono_ok = True
    for n in range(1, 7):
        for _ in range(10):
            rates = wl.RayRates(tuple(rng.uniform(0.2, 5.0, size=n)))
            spec = wl.km_spectrum(rates, n)
            for theta in (0.1, 1.0, 10.0):
                prod = spec.laplace_product(theta)
                direct = wl.hitting_laplace(
                    RateGraph.path(rates.truncated(n)), [n], 0, theta
                )
                if abs(prod - direct) > 1e-9:
                    laplace_ok = False
            for j in range(1, n + 1):
                rep = wl.km_monotonicity(rates, n, j, 0.1)
                if not rep.eigenvalues_weakly_increase:
                    mono_ok = False
    ok = laplace_ok and mono_ok
    _report(capsys, 9, ok, f"laplace={laplace_ok} monotone={mono_ok}")
    assert ok


def test_acceptance_10_line_examples(capsys):
    scan = wl.line_return_probability_scan(grid=np.arange(0.1, 5.0001, 0.1))
    regime = wl.regime_ratio_experiment(n=200, k=round((math.sqrt(2) - 1) * 200))
    target = (1 + math.sqrt(2)) / 2
    ok = len(scan.violation_times) > 0 and abs(regime.ratio - target) / target < 0.02
    _report(
        capsys, 10, ok,
        f"violations={len(scan.violation_times)} ratio={regime.ratio:.5f} target={target:.5f}",
    )
    assert ok


def test_acceptance_11_reflection_principle(capsys):
    ok = True
    worst = 0.0
    for matrix in (wl.dihedral_matrix(5), wl.type_a_matrix(3)):
        real = wl.coxeter_group(matrix)
        cg = real.cayley
        rates = wl.RateAssignment({lab: 1.0 for lab in cg.gens.labels})
        g = RateGraph.from_cayley(cg, rates)
        for t in (0.5, 2.0):
            d = wl.transition_distribution(g, 0, t)
            for wall in wl.all_walls(real):
                lhs = wl.wall_crossing_cdf(
                    g, [(x, y) for x, y, _ in wall.edges], 0, t
                )
                rhs = 2.0 * float(sum(d[int(x)] for x in wall.negative_side))
                worst = max(worst, abs(lhs - rhs))
                if abs(lhs - rhs) > 1e-9:
                    ok = False
    _report(capsys, 11, ok, f"max_error={worst:.2e}")
    assert ok


def test_acceptance_12_stochastic_search(capsys):
    cfg = wl.SearchConfig(
        family="dihedral", n_range=(5, 5), n_generators=4, budget=200_000, seed=0
    )
    found = wl.random_search(cfg)
    has_l12 = any(ex.p_deltas[1.2] > 1e-10 for ex in found)
    classical_ok = all(
        ex.p_deltas[2.0] <= 1e-12 and ex.p_deltas[math.inf] <= 1e-12 for ex in found
    )
    ok = has_l12 and classical_ok
    _report(
        capsys, 12, ok,
        f"found={len(found)} l1.2_increase={has_l12} p2_pinf_nonpositive={classical_ok}",
    )
    assert ok


def test_acceptance_13_occupation_dominance(capsys):
    rng = np.random.default_rng(5)
    dom_ok = True
    for _ in range(5):
        rr = wl.RayRates(tuple(rng.uniform(0.2, 3.0, size=6)), extend=1.0)
        occ = wl.occupation_samples(
            rr, None, states=(0, 1), t=2.0, replicas=10_000,
            seed=int(rng.integers(1 << 30)),
        )
        if wl.dominance_test(occ[0], occ[1]).verdict != "Dominates":
            dom_ok = False
    rr = wl.RayRates((1000.0, 1.0, 0.0))
    occ = wl.occupation_samples(rr, None, states=(1, 2), t=3.0, replicas=10_000, seed=7)
    crosses = wl.dominance_test(occ[1], occ[2]).verdict == "Crosses"
    ok = dom_ok and crosses
    _report(capsys, 13, ok, f"rays_dominate={dom_ok} crossing_example={crosses}")
    assert ok


def test_acceptance_14_wall_axioms_catalog(capsys):
    matrices = [
        ("A1", wl.CoxeterMatrix.from_json([[1]])),
        ("A2", wl.type_a_matrix(2)),
        ("A3", wl.type_a_matrix(3)),
        ("B2", wl.type_b_matrix(2)),
        ("B3", wl.type_b_matrix(3)),
        ("A1xA1", wl.CoxeterMatrix.from_json([[1, 2], [2, 1]])),
    ] + [(f"I2({m})", wl.dihedral_matrix(m)) for m in range(5, 25)]
    ok = True
    for name, matrix in matrices:
        real = wl.coxeter_group(matrix)
        if real.group.order > 48:
            continue
        report = wl.verify_wall_axioms(real)
        if not report.all_pass:
            ok = False
    _report(capsys, 14, ok)
    assert ok
