import math

import numpy as np
import pytest

import walklab as wl


def test_abelian_perturbations_never_increase_lp():
    rng = np.random.default_rng(2)
    for n in (6, 9):
        group, gens = wl.builtin_group("cyclic", n, steps=(1, 2))
        r2 = float(rng.uniform(1, 5))
        rates = wl.RateAssignment({"+1": 2.0, "-1": 2.0, "+2": r2, "-2": r2})
        for t in (0.3, 2.0):
            for p in (1.0, 2.0, math.inf):
                lp, ent = wl.perturb_metric_delta(group, gens, rates, "+1", 0.5, t, p)
                assert lp <= 1e-12
                assert ent >= -1e-12


def test_l2_and_linf_never_increase_on_dihedral():
    group, gens = wl.builtin_group("dihedral", 7)
    rates = wl.RateAssignment({lab: 1.5 for lab in gens.labels})
    for lab in gens.labels:
        for t in (0.2, 1.0, 4.0):
            for p in (2.0, math.inf):
                lp, _ = wl.perturb_metric_delta(group, gens, rates, lab, 1.0, t, p)
                assert lp <= 1e-12


def test_abelian_search_finds_nothing():
    cfg = wl.SearchConfig(family="cyclic", n_range=(3, 8), budget=150, seed=1)
    assert wl.random_search(cfg) == []


def test_dihedral_search_finds_documented_example():
    cfg = wl.SearchConfig(seed=0, budget=2000, stop_after=1)
    found = wl.random_search(cfg)
    assert len(found) == 1
    ex = found[0]
    assert ex.family == "dihedral"
    assert max(ex.p_deltas.values()) > 1e-10
    # the classical p = 2 and p = inf distances still decrease
    assert ex.p_deltas[2.0] <= 1e-12
    assert ex.p_deltas[math.inf] <= 1e-12


def test_found_example_round_trip_and_reverify():
    cfg = wl.SearchConfig(seed=0, budget=2000, stop_after=1)
    ex = wl.random_search(cfg)[0]
    back = wl.FoundExample.from_json(ex.to_json())
    assert back == ex
    assert wl.reverify(back)
    broken = wl.FoundExample.from_json(ex.to_json())
    broken.p_deltas[2.0] += 1e-6
    assert not wl.reverify(broken)


def test_p_increase_interval_excludes_two():
    cfg = wl.SearchConfig(seed=0, budget=2000, stop_after=1)
    ex = wl.random_search(cfg)[0]
    intervals = wl.p_increase_interval(ex)
    assert intervals, "stored example must yield a positive interval"
    for lo, hi in intervals:
        assert not (lo <= 2.0 <= hi)
        assert 1.0 <= lo <= hi


def test_budget_exhausted_carries_partial_results():
    cfg = wl.SearchConfig(family="cyclic", n_range=(3, 6), budget=20, stop_after=1, seed=4)
    with pytest.raises(wl.BudgetExhausted) as exc:
        wl.random_search(cfg)
    assert exc.value.results == []


def test_search_is_deterministic():
    cfg = wl.SearchConfig(seed=0, budget=400, stop_after=1)
    a = wl.random_search(cfg)
    b = wl.random_search(cfg)
    assert [e.to_json() for e in a] == [e.to_json() for e in b]


def test_catalog_reproductions_all_pass():
    rep = wl.catalog_reproductions()
    assert rep.all_pass()
    assert rep.star_entropy_high < rep.star_entropy_low
    assert abs(rep.mod8_gap - 0.10625) < 5e-4
    assert rep.mod2n_expected_distance > 1.3
