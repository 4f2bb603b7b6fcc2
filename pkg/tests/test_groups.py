import numpy as np
import pytest

import walklab as wl
from walklab.groups import Permutation


def test_permutation_compose_and_inverse():
    p = Permutation.from_cycles(4, [(0, 1)])
    q = Permutation.from_cycles(4, [(1, 2)])
    assert (p * q).images != (q * p).images
    assert (p * p.inverse()) == Permutation.identity(4)
    r = p * q
    # (p*q)(i) = p(q(i))
    assert r.images == tuple(p.images[q.images[i]] for i in range(4))


def test_generate_group_closure_matches_brute_force():
    gens = [Permutation.from_cycles(4, [(0, 1)]), Permutation.from_cycles(4, [(0, 1, 2, 3)])]
    group = wl.generate_group(gens)
    assert group.order == 24
    # closure: multiplication table stays inside the element list
    els = group.elements
    for i in range(group.order):
        for j in range(group.order):
            assert els[group.mul(i, j)] == els[i] * els[j]


def test_generate_group_cap():
    gens = [Permutation.from_cycles(6, [(0, 1)]), Permutation.from_cycles(6, [(0, 1, 2, 3, 4, 5)])]
    with pytest.raises(wl.CapExceeded):
        wl.generate_group(gens, cap=100)


@pytest.mark.parametrize(
    "family,n,order",
    [
        ("cyclic", 7, 7),
        ("cyclic", 2, 2),
        ("dihedral", 5, 10),
        ("dihedral", 2, 4),
        ("dicyclic", 3, 12),
        ("dicyclic", 2, 8),
        ("symmetric", 4, 24),
    ],
)
def test_builtin_group_orders(family, n, order):
    group, gens = wl.builtin_group(family, n)
    assert group.order == order
    # generating set closed under inverse and actually generates
    cg = wl.cayley_graph(group, gens)
    assert int(cg.dist.max()) >= 1


def test_builtin_group_unknown_family():
    with pytest.raises(wl.UnsupportedFamily):
        wl.builtin_group("sporadic", 5)


def test_cyclic_steps_distances():
    group, gens = wl.builtin_group("cyclic", 12, steps=(1, 5))
    cg = wl.cayley_graph(group, gens)
    # brute-force BFS over residues
    import collections

    dist = {0: 0}
    q = collections.deque([0])
    while q:
        x = q.popleft()
        for s in (1, -1, 5, -5):
            y = (x + s) % 12
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    for r in range(12):
        shift = Permutation(tuple((i + r) % 12 for i in range(12)))
        idx = group.elements.index(shift)
        assert cg.dist[idx] == dist[r]


def test_not_generating_raises():
    group, _ = wl.builtin_group("cyclic", 8)
    # +2/-2 only reach even residues
    shift2 = Permutation(tuple((i + 2) % 8 for i in range(8)))
    e2 = group.elements.index(shift2)
    gens = wl.GeneratorSet.build(group, [("+2", e2), ("-2", group.inv[e2])])
    with pytest.raises(wl.NotGenerating):
        wl.cayley_graph(group, gens)


def test_generator_set_validation():
    group, _ = wl.builtin_group("cyclic", 5)
    with pytest.raises(wl.EmptyGenerators):
        wl.GeneratorSet.build(group, [])
    shift = Permutation(tuple((i + 1) % 5 for i in range(5)))
    e = group.elements.index(shift)
    with pytest.raises(ValueError):
        # not closed under inverses
        wl.GeneratorSet.build(group, [("+1", e)])
    with pytest.raises(ValueError):
        # identity not allowed
        wl.GeneratorSet.build(group, [("e", 0), ("x", e), ("y", group.inv[e])])


def test_rate_assignment_symmetry_enforced():
    group, gens = wl.builtin_group("cyclic", 5)
    bad = wl.RateAssignment({"+1": 1.0, "-1": 2.0})
    with pytest.raises(ValueError):
        bad.validate(gens)
    good = wl.RateAssignment({"+1": 1.0, "-1": 1.0})
    good.validate(gens)
    up = good.perturbed(gens, "+1", 0.5)
    assert up["+1"] == up["-1"] == 1.5
    with pytest.raises(ValueError):
        wl.RateAssignment({"+1": -1.0, "-1": -1.0})


def test_direct_product_distances_add():
    a = wl.builtin_group("cyclic", 3)
    b = wl.builtin_group("cyclic", 4)
    group, gens = wl.direct_product(a, b)
    assert group.order == 12
    cg = wl.cayley_graph(group, gens)
    da = wl.cayley_graph(*a).dist
    db = wl.cayley_graph(*b).dist
    expected = sorted(int(x) + int(y) for x in da for y in db)
    assert sorted(int(d) for d in cg.dist) == expected


def test_direct_product_with_trivial_group():
    a = wl.builtin_group("dihedral", 4)
    group, gens = wl.direct_product(a, wl.trivial_group())
    assert group.order == a[0].order
    cg = wl.cayley_graph(group, gens)
    da = wl.cayley_graph(*a).dist
    assert sorted(map(int, cg.dist)) == sorted(map(int, da))


def test_pairing_is_involution():
    group, gens = wl.builtin_group("dihedral", 5)
    cg = wl.cayley_graph(group, gens)
    pair = cg.pairing("a")
    assert np.array_equal(pair[pair], np.arange(group.order))
    with pytest.raises(ValueError):
        # rotations in D5 are not involutions
        gp, gn = wl.builtin_group("cyclic", 5)
        wl.cayley_graph(gp, gn).pairing("+1")
