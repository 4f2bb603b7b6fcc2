"""Finite groups from permutation generators, generating sets with rates,
and Cayley graphs with the word-length metric.

Groups are stored as indexed element lists with multiplication tables.
Element 0 is always the identity, and indexing is BFS order from the
identity with generators taken in the order given, so every downstream
computation is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapExceeded,
    DuplicateGenerators,
    EmptyGenerators,
    NotGenerating,
    UnsupportedFamily,
)

DEFAULT_CAP = 20_000


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., m-1}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        m = len(self.images)
        if sorted(self.images) != list(range(m)):
            raise ValueError(f"not a permutation of 0..{m - 1}: {self.images}")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(m)))

    @classmethod
    def from_cycles(cls, m: int, cycles) -> "Permutation":
        images = list(range(m))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(tuple(images))

    @property
    def size(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (p * q)(i) = p(q(i)): apply q first.
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))


@dataclass(frozen=True)
class FiniteGroup:
    """Element-indexed multiplication structure; identity has index 0."""

    elements: tuple[Permutation, ...]
    mult: np.ndarray  # (n, n) int array, mult[i, j] = index of e_i * e_j
    inv: np.ndarray  # length-n int array
    descriptions: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return int(self.mult[i, j])

    def conjugate(self, w: int, s: int) -> int:
        """w * s * w^-1."""
        return int(self.mult[self.mult[w, s], self.inv[w]])

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mul(x, i)
            k += 1
        return k


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric labelled generating set (closed under inverses)."""

    labels: tuple[str, ...]
    elems: tuple[int, ...]  # element index per label
    inverse_label: dict = field(hash=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def is_involution(self, label: str) -> bool:
        return self.inverse_label[label] == label

    def elem(self, label: str) -> int:
        return self.elems[self.labels.index(label)]

    @classmethod
    def build(cls, group: FiniteGroup, named: list[tuple[str, int]]) -> "GeneratorSet":
        """Validate and assemble a generating set from (label, element) pairs.

        Requires closure under inverses, no identity element, and no
        duplicate labels or elements.
        """
        if not named:
            raise EmptyGenerators("generator list is empty")
        labels = [lab for lab, _ in named]
        elems = [e for _, e in named]
        if len(set(labels)) != len(labels):
            raise DuplicateGenerators(f"duplicate labels in {labels}")
        if len(set(elems)) != len(elems):
            raise DuplicateGenerators("the same element appears under two labels")
        if 0 in elems:
            raise ValueError("identity element is not allowed as a generator")
        by_elem = {e: lab for lab, e in named}
        inverse_label = {}
        for lab, e in named:
            e_inv = int(group.inv[e])
            if e_inv not in by_elem:
                raise ValueError(f"generator {lab!r} has no inverse in the set")
            inverse_label[lab] = by_elem[e_inv]
        return cls(tuple(labels), tuple(elems), inverse_label)


@dataclass(frozen=True)
class RateAssignment:
    """Nonnegative rate per generator label, with r_s = r_{s^-1}."""

    rates: dict = field(hash=False)

    def __post_init__(self):
        for lab, r in self.rates.items():
            if r < 0:
                raise ValueError(f"negative rate for {lab!r}")

    def validate(self, gens: GeneratorSet) -> None:
        for lab in gens.labels:
            if lab not in self.rates:
                raise ValueError(f"missing rate for generator {lab!r}")
            if self.rates[lab] != self.rates[gens.inverse_label[lab]]:
                raise ValueError(f"rates of {lab!r} and its inverse differ")

    def __getitem__(self, label: str) -> float:
        return self.rates[label]

    def perturbed(self, gens: GeneratorSet, label: str, delta: float) -> "RateAssignment":
        """Raise the rate of `label` and its inverse label by delta."""
        new = dict(self.rates)
        new[label] = new[label] + delta
        new[gens.inverse_label[label]] = new[label]
        return RateAssignment(new)


@dataclass(frozen=True)
class CayleyGraph:
    """Right Cayley graph: edge (x, x*s) per state x and generator s."""

    group: FiniteGroup
    gens: GeneratorSet
    nxt: np.ndarray  # (n, k) int array, nxt[x, j] = x * s_j
    dist: np.ndarray  # BFS distance from identity

    @property
    def n(self) -> int:
        return self.group.order

    def pairing(self, label: str) -> np.ndarray:
        """The involution x -> x*s on states (requires s an involution)."""
        j = self.gens.labels.index(label)
        if not self.gens.is_involution(label):
            raise ValueError(f"{label!r} is not an involution")
        return self.nxt[:, j]


def generate_group(
    perm_generators: list[Permutation], cap: int = DEFAULT_CAP
) -> FiniteGroup:
    """Closure of the generators under composition, indexed in BFS order."""
    if not perm_generators:
        raise EmptyGenerators("no permutation generators given")
    m = perm_generators[0].size
    if any(p.size != m for p in perm_generators):
        raise ValueError("generators act on different ground sets")

    ident = Permutation.identity(m)
    index = {ident: 0}
    elements = [ident]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x = elements[i]
        for g in perm_generators:
            y = x * g
            if y not in index:
                if len(elements) >= cap:
                    raise CapExceeded(f"group closure exceeds cap={cap}")
                index[y] = len(elements)
                elements.append(y)
                queue.append(index[y])

    n = len(elements)
    mult = np.empty((n, n), dtype=np.int32)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            mult[i, j] = index[x * y]
    inv = np.empty(n, dtype=np.int32)
    for i, x in enumerate(elements):
        inv[i] = index[x.inverse()]
    return FiniteGroup(tuple(elements), mult, inv)


def cayley_graph(group: FiniteGroup, gens: GeneratorSet) -> CayleyGraph:
    """Adjacency and BFS distances from the identity; errors if not generating."""
    n = group.order
    k = gens.size
    nxt = np.empty((n, k), dtype=np.int32)
    for j, e in enumerate(gens.elems):
        nxt[:, j] = group.mult[:, e]
    dist = np.full(n, -1, dtype=np.int32)
    dist[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nxt[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(int(y))
    if (dist < 0).any():
        raise NotGenerating("generators do not generate the group")
    return CayleyGraph(group, gens, nxt, dist)


def _cyclic_perm(n: int, step: int) -> Permutation:
    return Permutation(tuple((i + step) % n for i in range(n)))


def builtin_group(family: str, n: int, steps: tuple[int, ...] = (1,)):
    """Canonical permutation realization of a catalog family.

    cyclic:    Z/nZ acting on n points; generators +-step per entry of `steps`.
    dihedral:  order 2n, two reflection involutions a: i -> -i, b: i -> 1-i.
    dicyclic:  order 4n via the left-regular action on pairs (i, eps).
    symmetric: S_n with adjacent transpositions.
    """
    if family == "cyclic":
        if n < 2:
            raise UnsupportedFamily("cyclic requires n >= 2")
        perms, named_steps = [], []
        for s in steps:
            s = s % n
            if s == 0:
                raise ValueError("step 0 is the identity")
            perms.append(_cyclic_perm(n, s))
            named_steps.append(s)
            if (-s) % n != s:
                perms.append(_cyclic_perm(n, -s))
                named_steps.append((-s) % n)
        group = generate_group(perms)
        # element index of step s: BFS found them, search by permutation
        named = []
        seen = set()
        for s in named_steps:
            if s in seen:
                continue
            seen.add(s)
            p = _cyclic_perm(n, s)
            named.append((f"+{s}" if s <= n // 2 else f"-{n - s}", group.elements.index(p)))
        gens = GeneratorSet.build(group, named)
        return group, gens

    if family == "dihedral":
        if n < 1:
            raise UnsupportedFamily("dihedral requires n >= 1")
        if n == 1:
            a = Permutation((1, 0))
            group = generate_group([a])
            gens = GeneratorSet.build(group, [("a", 1)])
            return group, gens
        if n == 2:
            a = Permutation.from_cycles(4, [(0, 1)])
            b = Permutation.from_cycles(4, [(2, 3)])
        else:
            a = Permutation(tuple((-i) % n for i in range(n)))
            b = Permutation(tuple((1 - i) % n for i in range(n)))
        group = generate_group([a, b])
        gens = GeneratorSet.build(
            group, [("a", group.elements.index(a)), ("b", group.elements.index(b))]
        )
        return group, gens

    if family == "dicyclic":
        if n < 2:
            raise UnsupportedFamily("dicyclic requires n >= 2")
        m = 4 * n  # points are (i, eps) -> eps * 2n + i, meaning a^i b^eps
        two_n = 2 * n

        def pack(i, eps):
            return eps * two_n + (i % two_n)

        a_img = [0] * m
        b_img = [0] * m
        for i in range(two_n):
            a_img[pack(i, 0)] = pack(i + 1, 0)
            a_img[pack(i, 1)] = pack(i + 1, 1)
            b_img[pack(i, 0)] = pack(-i, 1)
            b_img[pack(i, 1)] = pack(n - i, 0)
        a = Permutation(tuple(a_img))
        b = Permutation(tuple(b_img))
        group = generate_group([a, b, a.inverse(), b.inverse()])
        named = [
            ("a", group.elements.index(a)),
            ("a^-1", group.elements.index(a.inverse())),
            ("b", group.elements.index(b)),
            ("b^-1", group.elements.index(b.inverse())),
        ]
        gens = GeneratorSet.build(group, named)
        return group, gens

    if family == "symmetric":
        if n < 2:
            raise UnsupportedFamily("symmetric requires n >= 2")
        perms = [Permutation.from_cycles(n, [(i, i + 1)]) for i in range(n - 1)]
        group = generate_group(perms)
        named = [(f"s{i + 1}", group.elements.index(p)) for i, p in enumerate(perms)]
        gens = GeneratorSet.build(group, named)
        return group, gens

    raise UnsupportedFamily(f"unknown family {family!r}")


def direct_product(
    a: tuple[FiniteGroup, GeneratorSet], b: tuple[FiniteGroup, GeneratorSet], cap: int = DEFAULT_CAP
):
    """Direct product with generating set (S1 x {o2}) u ({o1} x S2).

    Factor permutations act on disjoint ground sets; word length adds.
    """
    (ga, sa), (gb, sb) = a, b
    ma = ga.elements[0].size
    mb = gb.elements[0].size

    def lift_a(p: Permutation) -> Permutation:
        return Permutation(tuple(p.images) + tuple(ma + i for i in range(mb)))

    def lift_b(p: Permutation) -> Permutation:
        return Permutation(tuple(range(ma)) + tuple(ma + i for i in p.images))

    labels_a = sa.labels if sa is not None else ()
    elems_a = sa.elems if sa is not None else ()
    labels_b = sb.labels if sb is not None else ()
    elems_b = sb.elems if sb is not None else ()
    perms = [lift_a(ga.elements[e]) for e in elems_a] + [lift_b(gb.elements[e]) for e in elems_b]
    group = generate_group(perms, cap=cap)
    named = []
    for lab, e in zip(labels_a, elems_a):
        named.append((f"a:{lab}", group.elements.index(lift_a(ga.elements[e]))))
    for lab, e in zip(labels_b, elems_b):
        named.append((f"b:{lab}", group.elements.index(lift_b(gb.elements[e]))))
    gens = GeneratorSet.build(group, named)
    return group, gens


def trivial_group() -> tuple[FiniteGroup, GeneratorSet]:
    """Order-1 group (no generators; usable only as a product factor)."""
    ident = Permutation.identity(1)
    group = FiniteGroup((ident,), np.zeros((1, 1), dtype=np.int32), np.zeros(1, dtype=np.int32))
    return group, None
