"""Finite groups given by Cayley tables, with subgroup and homomorphism queries.

Elements are integers ``0..order-1`` and ``0`` is always the identity.  Every
derived object (subgroups, quotients, centralizers) is again backed by a table,
so cochains on it can be indexed the same way as on the ambient group.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedSpec, NotAGroup, NotNormal, TooLarge

MAX_ORDER = 1 << 16
FULL_ASSOCIATIVITY_CHECK = 64
MAX_SUBGROUP_SEARCH = 1024
MAX_HOM_SEARCH = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as its multiplication table.

    ``table[g, h]`` is the index of ``g*h``.  Construction validates the group
    axioms; instances are immutable and compared by identity.
    """

    table: np.ndarray
    name: str = "G"

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64, copy=True)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise NotAGroup(f"{self.name}: table must be a non-empty square array")
        n = t.shape[0]
        if n > MAX_ORDER:
            raise TooLarge(f"{self.name}: order {n} exceeds {MAX_ORDER}")
        if t.min() < 0 or t.max() >= n:
            raise NotAGroup(f"{self.name}: table entries must lie in 0..{n - 1}")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise NotAGroup(f"{self.name}: element 0 is not a two-sided identity")
        srt = np.sort(t, axis=1)
        if not (srt == ar).all():
            bad = int(np.nonzero((srt != ar).any(axis=1))[0][0])
            raise NotAGroup(f"{self.name}: row {bad} is not a permutation (Latin square violated)")
        srt = np.sort(t, axis=0)
        if not (srt == ar[:, None]).all():
            bad = int(np.nonzero((srt != ar[:, None]).any(axis=0))[0][0])
            raise NotAGroup(f"{self.name}: column {bad} is not a permutation (Latin square violated)")
        _check_associative(t, self.name)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmin(self.table, axis=1)  # the unique column holding 0
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def conj(self, x: int, g: int) -> int:
        """Return ``x g x^-1``."""
        t = self.table
        return int(t[t[x, g], self.inverses[x]])

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = int(self.table[x, g])
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.element_orders)

    def fingerprint(self) -> tuple:
        return (self.order, tuple(sorted(Counter(self.element_orders).items())), self.is_abelian)

    def to_text(self) -> str:
        lines = [f"group {self.name}", f"order {self.order}", "table"]
        lines.extend(" ".join(str(int(v)) for v in row) for row in self.table)
        return "\n".join(lines) + "\n"


def _check_associative(t: np.ndarray, name: str) -> None:
    n = t.shape[0]
    if n <= FULL_ASSOCIATIVITY_CHECK:
        left = t[t]  # [a, b, c] -> (ab)c
        right = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
        bad = np.argwhere(left != right)
    else:
        rng = np.random.default_rng(0x5EED)
        a, b, c = rng.integers(0, n, size=(3, 20000))
        bad = np.nonzero(t[t[a, b], c] != t[a, t[b, c]])[0]
        bad = [(a[i], b[i], c[i]) for i in bad]
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        raise NotAGroup(f"{name}: associativity fails at ({a}, {b}, {c})")


# ---------------------------------------------------------------------------
# constructors


def group_from_permutations(gens: Sequence[Sequence[int]], degree: int, name: str = "G") -> FiniteGroup:
    """Close one-line permutations (images of ``1..degree``) under composition.

    Elements are numbered in breadth-first order from the identity;
    ``g*h`` means "apply ``h`` first, then ``g``".
    """
    ident = tuple(range(degree))
    perms = []
    for g in gens:
        p = tuple(int(x) - 1 for x in g)
        if sorted(p) != list(ident):
            raise MalformedSpec(f"not a permutation of 1..{degree}: {list(g)}")
        perms.append(p)
    index = {ident: 0}
    elems = [ident]
    i = 0
    while i < len(elems):
        a = elems[i]
        for s in perms:
            b = tuple(a[s[x]] for x in range(degree))
            if b not in index:
                if len(elems) >= MAX_ORDER:
                    raise TooLarge(f"{name}: permutation group exceeds order {MAX_ORDER}")
                index[b] = len(elems)
                elems.append(b)
        i += 1
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[tuple(a[b[x]] for x in range(degree))]
    return FiniteGroup(table, name)


def trivial_group(name: str = "1") -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), name)


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, name or f"Z{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Product with element ``(x, y)`` stored at index ``x * |b| + y``."""
    m = b.order
    ta, tb = a.table, b.table
    table = (ta[:, None, :, None] * m + tb[None, :, None, :]).reshape(a.order * m, a.order * m)
    return FiniteGroup(table, name or f"{a.name}x{b.name}")


def abelian(*factors: int, name: str | None = None) -> FiniteGroup:
    if not factors:
        return trivial_group(name or "1")
    g = cyclic(factors[0])
    for f in factors[1:]:
        g = direct_product(g, cyclic(f))
    return FiniteGroup(g.table, name or "x".join(f"Z{f}" for f in factors))


def symmetric(n: int, name: str | None = None) -> FiniteGroup:
    if n <= 1:
        return trivial_group(name or f"S{n}")
    gens = [[2, 1] + list(range(3, n + 1))]
    if n > 2:
        gens.append(list(range(2, n + 1)) + [1])
    return group_from_permutations(gens, n, name or f"S{n}")


def alternating(n: int, name: str | None = None) -> FiniteGroup:
    if n < 3:
        return trivial_group(name or f"A{n}")
    gens = []
    for k in range(3, n + 1):  # 3-cycles (1 2 k) generate A_n
        p = list(range(1, n + 1))
        p[0], p[1], p[k - 1] = 2, k, 1
        gens.append(p)
    return group_from_permutations(gens, n, name or f"A{n}")


def dihedral(n: int, name: str | None = None) -> FiniteGroup:
    """Dihedral group of order ``2n`` (symmetries of the ``n``-gon)."""
    if n < 3:
        return abelian(*([2] * n), name=name or f"D{n}") if n else trivial_group(name or "D0")
    rot = list(range(2, n + 1)) + [1]
    ref = [1] + list(range(n, 1, -1))
    return group_from_permutations([rot, ref], n, name or f"D{n}")


def quaternion(name: str = "Q8") -> FiniteGroup:
    # i, j as permutations of the regular representation on {±1, ±i, ±j, ±k}
    i = [3, 4, 2, 1, 7, 8, 6, 5]
    j = [5, 6, 8, 7, 2, 1, 3, 4]
    return group_from_permutations([i, j], 8, name)


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    """One representative of every isomorphism class of order ``<= max_order`` (at most 15)."""
    if max_order > 15:
        raise TooLarge("small_groups catalogue stops at order 15")
    out = [trivial_group()]
    for n in range(2, max_order + 1):
        out.extend(_catalogue(n))
    return out


def _catalogue(n: int) -> list[FiniteGroup]:
    groups = {
        4: [abelian(2, 2)],
        6: [symmetric(3)],
        8: [abelian(2, 4), abelian(2, 2, 2), dihedral(4), quaternion()],
        9: [abelian(3, 3)],
        10: [dihedral(5)],
        12: [abelian(2, 6), alternating(4), dihedral(6), _dicyclic3()],
        14: [dihedral(7)],
    }.get(n, [])
    return [cyclic(n)] + groups


def _dicyclic3() -> FiniteGroup:
    # Z3 x| Z4 with the generator of Z4 inverting Z3; element (a, b) -> a*4 + b
    table = np.empty((12, 12), dtype=np.int64)
    for a1, b1, a2, b2 in product(range(3), range(4), range(3), range(4)):
        a = (a1 + (a2 if b1 % 2 == 0 else -a2)) % 3
        table[a1 * 4 + b1, a2 * 4 + b2] = a * 4 + (b1 + b2) % 4
    return FiniteGroup(table, "Dic3")


def builtin_group(name: str) -> FiniteGroup | None:
    """Resolve names such as ``Z4``, ``Z2xZ2``, ``S3``, ``A4``, ``D4``, ``Q8``, ``1``."""
    key = name.strip()
    if key in ("1", "trivial", "Z1"):
        return trivial_group(key)
    parts = key.split("x")
    if all(p.startswith("Z") and p[1:].isdigit() and int(p[1:]) > 0 for p in parts):
        return abelian(*(int(p[1:]) for p in parts), name=key)
    if len(key) > 1 and key[1:].isdigit():
        k = int(key[1:])
        if key[0] == "S" and k <= 6:
            return symmetric(k, key)
        if key[0] == "A" and k <= 6:
            return alternating(k, key)
        if key[0] == "D" and k >= 3:
            return dihedral(k, key)
    if key == "Q8":
        return quaternion()
    return None


# ---------------------------------------------------------------------------
# subgroups and quotients


def closure(G: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    """Sorted element tuple of the subgroup generated by ``gens``."""
    gens = [int(g) for g in gens if g != 0]
    seen = {0}
    frontier = [0]
    t = G.table
    while frontier:
        nxt = []
        for a in frontier:
            row = t[a]
            for s in gens:
                b = int(row[s])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return tuple(sorted(seen))


def _reindexed_table(G: FiniteGroup, elements: Sequence[int]) -> np.ndarray:
    elems = np.asarray(elements, dtype=np.int64)
    lookup = np.full(G.order, -1, dtype=np.int64)
    lookup[elems] = np.arange(len(elems))
    sub = lookup[G.table[np.ix_(elems, elems)]]
    if (sub < 0).any():
        raise NotAGroup("subset is not closed under multiplication")
    return sub


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup, remembered as a sorted set of parent indices.

    ``as_group`` numbers the elements by their position in ``elements``; since
    the identity has parent index 0 it keeps index 0.
    """

    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(int(e) for e in set(self.elements)))
        if not els or els[0] != 0:
            raise NotAGroup("a subgroup must contain the identity")
        object.__setattr__(self, "elements", els)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return int(g) in self.element_set

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elements == self.elements

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def embed(self) -> np.ndarray:
        e = np.asarray(self.elements, dtype=np.int64)
        e.setflags(write=False)
        return e

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def as_group(self) -> FiniteGroup:
        if self.order == self.parent.order:
            return self.parent
        return FiniteGroup(_reindexed_table(self.parent, self.elements), f"{self.parent.name}.sub{self.order}")

    def sort_key(self) -> tuple:
        return (self.order, self.elements)

    def conjugate(self, x: int) -> "Subgroup":
        return Subgroup(self.parent, tuple(self.parent.conj(x, h) for h in self.elements))

    def is_normal(self) -> bool:
        s = self.element_set
        return all(self.parent.conj(x, h) in s for x in range(self.parent.order) for h in self.elements)


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def lift_subgroup(N: Subgroup, H: Subgroup) -> Subgroup:
    """View ``N <= H.as_group`` as a subgroup of ``H.parent``."""
    return Subgroup(H.parent, tuple(H.elements[i] for i in N.elements))


def restrict_to(N: Subgroup, H: Subgroup) -> Subgroup:
    """Re-express ``N <= H <= G`` (given inside ``G``) as a subgroup of ``H.as_group``."""
    try:
        return Subgroup(H.as_group, tuple(H.index_of[g] for g in N.elements))
    except KeyError:
        raise NotNormal("subgroup is not contained in the ambient subgroup") from None


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Partition of the elements into classes, ordered by least element."""
    seen = np.zeros(G.order, dtype=bool)
    t, inv = G.table, G.inverses
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        cls = np.unique(t[t[:, g], inv])  # x g x^-1 for all x
        seen[cls] = True
        classes.append(tuple(int(c) for c in cls))
    return classes


def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    t = G.table
    return Subgroup(G, tuple(int(x) for x in np.nonzero(t[:, g] == t[g, :])[0]))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup of ``G``, sorted by (order, elements).

    Cyclic extension: each subgroup is a join of cyclic subgroups, so joining
    known subgroups with cyclic ones until nothing new appears is complete.
    """
    n = G.order
    if n > MAX_SUBGROUP_SEARCH:
        raise TooLarge(f"subgroup search limited to order {MAX_SUBGROUP_SEARCH}")
    cyclics: dict[tuple[int, ...], int] = {}
    for g in range(n):
        cyclics.setdefault(closure(G, [g]), g)
    full = tuple(range(n))
    divs = _divisors(n)
    found: dict[tuple[int, ...], list[int]] = {(0,): []}
    for c, g in cyclics.items():
        found.setdefault(c, [g] if g else [])
    queue = list(found)
    while queue:
        nxt = []
        for s in queue:
            sset = set(s)
            gens = found[s]
            for c, g in cyclics.items():
                if g in sset:
                    continue
                m = math.lcm(len(s), len(c))
                # Lagrange: the join's order is a multiple of m dividing n
                if not any(d % m == 0 and len(s) < d < n for d in divs):
                    j = full
                else:
                    j = closure(G, gens + [g])
                if j not in found:
                    found[j] = gens + [g]
                    nxt.append(j)
        queue = nxt
    subs = [Subgroup(G, els) for els in found]
    subs.sort(key=Subgroup.sort_key)
    return subs


def subgroup_conjugacy_reps(G: FiniteGroup) -> list[Subgroup]:
    """Lexicographically least member of each conjugacy class of subgroups."""
    reps = []
    seen: set[tuple[int, ...]] = set()
    for S in all_subgroups(G):
        if S.elements in seen:
            continue
        orbit = {S.conjugate(x).elements for x in range(G.order)}
        seen |= orbit
        reps.append(Subgroup(G, min(orbit)))
    reps.sort(key=Subgroup.sort_key)
    return reps


def normal_subgroups_in(H: Subgroup | FiniteGroup) -> list[Subgroup]:
    """Normal subgroups of ``H``, returned as subgroups of ``H.as_group``."""
    K = H.as_group if isinstance(H, Subgroup) else H
    return [N for N in all_subgroups(K) if N.is_normal()]


@dataclass(frozen=True, eq=False)
class QuotientGroup:
    """``H/N`` for ``N`` normal in ``H``; cosets numbered by least element."""

    source: Subgroup
    kernel: Subgroup  # subgroup of source.as_group
    as_group: FiniteGroup
    project: np.ndarray  # source.as_group index -> coset index
    cosets: tuple[tuple[int, ...], ...] = field(repr=False)


def quotient_group(H: Subgroup | FiniteGroup, N: Subgroup) -> QuotientGroup:
    """Quotient of ``H`` by ``N``.

    ``N`` may be a subgroup of ``H.as_group`` or of ``H.parent`` contained in ``H``.
    """
    if isinstance(H, FiniteGroup):
        H = whole(H)
    K = H.as_group
    if N.parent is not K:
        if N.parent is H.parent:
            N = restrict_to(N, H)
        else:
            raise NotNormal("N is neither a subgroup of H nor of H's parent")
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    t = K.table
    project = np.full(K.order, -1, dtype=np.int64)
    cosets = []
    for h in range(K.order):
        if project[h] >= 0:
            continue
        coset = t[h, N.embed]
        project[coset] = len(cosets)
        cosets.append(tuple(sorted(int(c) for c in coset)))
    reps = [c[0] for c in cosets]
    m = len(cosets)
    table = project[t[np.ix_(reps, reps)]]
    Q = FiniteGroup(table.reshape(m, m), f"{K.name}/{N.order}")
    project.setflags(write=False)
    return QuotientGroup(H, N, Q, project, tuple(cosets))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        img = np.asarray(self.images, dtype=np.int64)
        if len(img) != self.domain.order or img[0] != 0:
            raise NotAGroup("homomorphism must send identity to identity")
        D, C = self.domain.table, self.codomain.table
        if not np.array_equal(img[D], C[img[:, None], img[None, :]]):
            raise NotAGroup("images do not respect multiplication")
        object.__setattr__(self, "images", tuple(int(i) for i in img))

    def __call__(self, g: int) -> int:
        return self.images[g]

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and other.domain is self.domain
                and other.codomain is self.codomain and other.images == self.images)

    def __hash__(self) -> int:
        return hash(self.images)

    @property
    def is_trivial(self) -> bool:
        return not any(self.images)

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and len(set(self.images)) == self.domain.order


def generating_set(G: FiniteGroup) -> list[int]:
    """A small generating set, chosen greedily by decreasing element order."""
    orders = G.element_orders
    gens: list[int] = []
    current: tuple[int, ...] = (0,)
    for g in sorted(range(1, G.order), key=lambda x: (-orders[x], x)):
        if len(current) == G.order:
            break
        if g not in current:
            gens.append(g)
            current = closure(G, gens)
    return gens


def _extend(D: FiniteGroup, C: FiniteGroup, gens: Sequence[int], imgs: Sequence[int]) -> list[int] | None:
    """Extend generator images to a homomorphism, or ``None`` if inconsistent."""
    img = [-1] * D.order
    img[0] = 0
    frontier = [0]
    td, tc = D.table, C.table
    while frontier:
        nxt = []
        for a in frontier:
            ia = img[a]
            for s, t in zip(gens, imgs):
                b = int(td[a, s])
                v = int(tc[ia, t])
                if img[b] < 0:
                    img[b] = v
                    nxt.append(b)
                elif img[b] != v:
                    return None
        frontier = nxt
    return img


def _hom_search(D: FiniteGroup, C: FiniteGroup, bijective: bool = False, first: bool = False) -> list[list[int]]:
    gens = generating_set(D)
    dord, cord = D.element_orders, C.element_orders
    cands = [[c for c in range(C.order) if dord[g] % cord[c] == 0 and (not bijective or cord[c] == dord[g])]
             for g in gens]
    found = []
    seen = set()
    for imgs in product(*cands):
        img = _extend(D, C, gens, imgs)
        if img is None:
            continue
        if bijective and len(set(img)) != D.order:
            continue
        key = tuple(img)
        if key not in seen:
            seen.add(key)
            found.append(img)
            if first:
                break
    return found


def homs_between(D: FiniteGroup, C: FiniteGroup) -> list[GroupHom]:
    """All homomorphisms ``D -> C``, sorted by image tuple."""
    if D.order > MAX_HOM_SEARCH:
        raise TooLarge(f"homomorphism search limited to domain order {MAX_HOM_SEARCH}")
    homs = [GroupHom(D, C, tuple(img)) for img in _hom_search(D, C)]
    homs.sort(key=lambda h: h.images)
    return homs


def automorphisms(G: FiniteGroup) -> list[GroupHom]:
    if G.order > MAX_HOM_SEARCH:
        raise TooLarge(f"automorphism search limited to order {MAX_HOM_SEARCH}")
    homs = [GroupHom(G, G, tuple(img)) for img in _hom_search(G, G, bijective=True)]
    homs.sort(key=lambda h: h.images)
    return homs


def is_isomorphic(A: FiniteGroup, B: FiniteGroup) -> bool:
    if A.fingerprint() != B.fingerprint():
        return False
    return bool(_hom_search(A, B, bijective=True, first=True))


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors ``d1 | d2 | ...`` of an abelian group (all > 1)."""
    orders = np.asarray(G.element_orders)
    n = G.order
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    per_prime: list[list[int]] = []
    for p in primes:
        # ranks[k-1] = number of cyclic factors of order >= p^k
        ranks = []
        prev, k = 1, 1
        while True:
            cnt = int(np.count_nonzero((p ** k) % orders == 0))
            if cnt == prev:
                break
            ranks.append(round(math.log(cnt // prev, p)))
            prev, k = cnt, k + 1
        exps = [sum(1 for r in ranks if r > i) for i in range(ranks[0])] if ranks else []
        per_prime.append(sorted((p ** e for e in exps), reverse=True))
    width = max((len(x) for x in per_prime), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(x[i] for x in per_prime if i < len(x)))
    return sorted(f for f in factors if f > 1)


def group_label(G: FiniteGroup) -> str:
    """Human label such as ``Z/2xZ/2`` or ``S3``; isomorphism-invariant."""
    if G.order == 1:
        return "1"
    if G.is_abelian:
        return "x".join(f"Z/{f}" for f in abelian_invariants(G))
    if G.order <= 15:
        for K in _catalogue(G.order):
            if not K.is_abelian and is_isomorphic(G, K):
                return K.name
    return f"G{G.order}"
