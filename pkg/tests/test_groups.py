from __future__ import annotations

import itertools

import numpy as np
import pytest

from etale_atlas.errors import MalformedSpec, NotAGroup, NotNormal, TooLarge
from etale_atlas.formats import parse_group
from etale_atlas.groups import (
    FiniteGroup,
    abelian,
    all_subgroups,
    automorphisms,
    centralizer,
    closure,
    conjugacy_classes,
    cyclic,
    dihedral,
    group_from_permutations,
    group_label,
    homs_between,
    is_isomorphic,
    normal_subgroups_in,
    quaternion,
    quotient_group,
    small_groups,
    subgroup_conjugacy_reps,
    symmetric,
    trivial_group,
    whole,
)

from oracles import relabel

GROUPS = small_groups(12)
IDS = [f"{G.name}" for G in GROUPS]


def brute_subgroups(G: FiniteGroup) -> set[tuple[int, ...]]:
    """Closure of every generator triple; every subgroup of order <= 12 is 3-generated."""
    out = set()
    for gens in itertools.combinations_with_replacement(range(G.order), 3):
        out.add(closure(G, gens))
    return out


# --- loading ---------------------------------------------------------------


def test_load_cyclic_table():
    G = parse_group("group z2\norder 2\ntable\n0 1\n1 0\n")
    assert G.order == 2
    assert G.table.tolist() == [[0, 1], [1, 0]]


def test_load_permutations_gives_s3():
    G = parse_group("group s3\norder 6\nperm 3\n2 1 3\n2 3 1\n")
    assert G.order == 6 and not G.is_abelian
    assert is_isomorphic(G, symmetric(3))


def test_repeated_row_is_not_a_group():
    with pytest.raises(NotAGroup):
        parse_group("group bad\norder 2\ntable\n0 1\n0 1\n")


@pytest.mark.parametrize("text,line", [
    ("group g\norder 2\ntable\n0 1\n1 x\n", 5),
    ("group g\norder two\n", 2),
    ("group g\norder 3\nperm 3\n2 1 3\n", 2),
    ("group g\norder 2\nperm 2\n1 1\n", 4),
    ("grp g\n", 1),
])
def test_malformed_specs_report_line(text, line):
    with pytest.raises(MalformedSpec) as exc:
        parse_group(text, "g.grp")
    assert exc.value.line == line
    assert f"g.grp:{line}:" in str(exc.value)


def test_too_large_order_rejected():
    with pytest.raises(TooLarge):
        parse_group("group big\norder 70000\ntable\n")


def test_non_associative_latin_square_rejected():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    t = np.array([[0, 1, 2, 3, 4],
                  [1, 0, 3, 4, 2],
                  [2, 4, 0, 1, 3],
                  [3, 2, 4, 0, 1],
                  [4, 3, 1, 2, 0]])
    with pytest.raises(NotAGroup):
        FiniteGroup(t, "loop")


# --- structure ---------------------------------------------------------------


@pytest.mark.parametrize("G", GROUPS, ids=IDS)
def test_latin_square_and_inverses(G):
    n = G.order
    for r in range(n):
        assert sorted(G.table[r].tolist()) == list(range(n))
        assert sorted(G.table[:, r].tolist()) == list(range(n))
        assert G.table[r, G.inv(r)] == 0 and G.table[G.inv(r), r] == 0
    assert G.table[0].tolist() == list(range(n))


def test_s3_conjugacy_classes():
    sizes = sorted(len(c) for c in conjugacy_classes(symmetric(3)))
    assert sizes == [1, 2, 3]


def test_s3_classes_match_brute_force():
    G = symmetric(3)
    brute = {frozenset(int(G.table[G.table[x, g], G.inv(x)]) for x in range(6)) for g in range(6)}
    assert {frozenset(c) for c in conjugacy_classes(G)} == brute


@pytest.mark.parametrize("G", [cyclic(4), abelian(2, 2)], ids=["Z4", "Z2xZ2"])
def test_abelian_classes_are_singletons(G):
    assert conjugacy_classes(G) == [(g,) for g in range(G.order)]


@pytest.mark.parametrize("G", GROUPS, ids=IDS)
def test_orbit_stabilizer_and_class_partition(G):
    classes = conjugacy_classes(G)
    assert sorted(itertools.chain(*classes)) == list(range(G.order))
    assert classes[0] == (0,)
    for cl in classes:
        assert min(cl) == cl[0]
        assert G.order % len(cl) == 0
        for g in cl:
            assert centralizer(G, g).order * len(cl) == G.order


def test_centralizers_in_s3():
    G = symmetric(3)
    assert centralizer(G, 0).order == 6
    for g in range(6):
        if G.element_orders[g] == 2:
            Z = centralizer(G, g)
            assert Z.elements == tuple(sorted({0, g}))


def test_subgroup_counts():
    assert len(all_subgroups(cyclic(2))) == 2
    assert len(all_subgroups(symmetric(3))) == 6
    assert len(all_subgroups(abelian(2, 2))) == 5
    assert len(all_subgroups(symmetric(4))) == 30


@pytest.mark.parametrize("G", [G for G in GROUPS if G.order <= 12], ids=[G.name for G in GROUPS if G.order <= 12])
def test_subgroups_match_generator_closure(G):
    assert {H.elements for H in all_subgroups(G)} == brute_subgroups(G)


@pytest.mark.parametrize("G", GROUPS, ids=IDS)
def test_subgroup_invariants(G):
    for H in all_subgroups(G):
        assert G.order % H.order == 0
        assert 0 in H.elements
        s = H.element_set
        for a in H.elements:
            assert G.inv(a) in s
            for b in H.elements:
                assert int(G.table[a, b]) in s
        K = H.as_group
        e = H.embed
        for a in range(K.order):
            for b in range(K.order):
                assert e[K.table[a, b]] == G.table[e[a], e[b]]


@pytest.mark.parametrize("G", GROUPS, ids=IDS)
def test_conjugacy_reps_are_orbit_minima(G):
    subs = {H.elements for H in all_subgroups(G)}
    reps = subgroup_conjugacy_reps(G)
    seen = set()
    for H in reps:
        orbit = {H.conjugate(x).elements for x in range(G.order)}
        assert orbit <= subs
        assert H.elements == min(orbit, key=lambda e: (len(e), e))
        assert not (orbit & seen)
        seen |= orbit
    assert seen == subs


def test_conjugacy_rep_counts():
    assert len(subgroup_conjugacy_reps(symmetric(3))) == 4
    assert len(subgroup_conjugacy_reps(abelian(2, 2))) == 5
    assert len(subgroup_conjugacy_reps(trivial_group())) == 1


def test_normal_subgroups():
    G = symmetric(3)
    assert sorted(N.order for N in normal_subgroups_in(whole(G))) == [1, 3, 6]
    V = abelian(2, 2)
    assert len(normal_subgroups_in(whole(V))) == 5
    T = trivial_group()
    assert [N.elements for N in normal_subgroups_in(whole(T))] == [(0,)]


@pytest.mark.parametrize("G", GROUPS, ids=IDS)
def test_quotients_are_homomorphic_with_even_fibres(G):
    H = whole(G)
    for N in normal_subgroups_in(H):
        q = quotient_group(H, N)
        Q = q.as_group
        assert Q.order * N.order == G.order
        fib = np.bincount(q.project, minlength=Q.order)
        assert (fib == N.order).all()
        kernel = tuple(int(x) for x in np.nonzero(q.project == q.project[0])[0])
        assert kernel == N.elements
        p = q.project
        assert (p[G.table] == Q.table[p[:, None], p[None, :]]).all()


def test_quotient_examples():
    G = symmetric(3)
    Z3 = next(N for N in normal_subgroups_in(whole(G)) if N.order == 3)
    assert quotient_group(G, Z3).as_group.order == 2
    assert quotient_group(G, whole(G)).as_group.order == 1
    one = next(N for N in normal_subgroups_in(whole(G)) if N.order == 1)
    q = quotient_group(G, one)
    assert q.as_group.order == 6
    assert is_isomorphic(q.as_group, G)


def test_quotient_by_non_normal_raises():
    G = symmetric(3)
    T = next(H for H in all_subgroups(G) if H.order == 2)
    with pytest.raises(NotNormal):
        quotient_group(G, T)


def brute_homs(D: FiniteGroup, C: FiniteGroup) -> int:
    count = 0
    for imgs in itertools.product(range(C.order), repeat=D.order):
        if imgs[0] != 0:
            continue
        if all(imgs[D.table[a, b]] == C.table[imgs[a], imgs[b]] for a in range(D.order) for b in range(D.order)):
            count += 1
    return count


@pytest.mark.parametrize("D,C", [
    (cyclic(2), cyclic(2)), (cyclic(3), cyclic(2)), (symmetric(3), cyclic(2)),
    (cyclic(4), abelian(2, 2)), (abelian(2, 2), symmetric(3)), (cyclic(6), cyclic(3)),
])
def test_hom_counts_match_brute_force(D, C):
    homs = homs_between(D, C)
    assert len(homs) == brute_homs(D, C)
    assert len({h.images for h in homs}) == len(homs)


def test_hom_examples():
    assert len(homs_between(cyclic(2), cyclic(2))) == 2
    assert len(homs_between(cyclic(3), cyclic(2))) == 1
    assert len(homs_between(symmetric(3), cyclic(2))) == 2


def test_automorphism_counts():
    assert len(automorphisms(abelian(2, 2))) == 6
    assert len(automorphisms(symmetric(3))) == 6
    assert len(automorphisms(cyclic(8))) == 4
    assert len(automorphisms(quaternion())) == 24


def test_labels():
    assert group_label(abelian(2, 2)) == "Z/2xZ/2"
    assert group_label(symmetric(3)) == "S3"
    assert group_label(dihedral(4)) == "D4"
    assert group_label(quaternion()) == "Q8"


@pytest.mark.parametrize("seed", range(4))
def test_relabelled_copy_is_isomorphic(seed):
    rng = np.random.default_rng(seed)
    G = GROUPS[seed * 3 % len(GROUPS)]
    perm = [0] + (1 + rng.permutation(G.order - 1)).tolist()
    G2 = FiniteGroup(relabel(G.table, perm), G.name + "'")
    assert is_isomorphic(G, G2)
    assert len(all_subgroups(G)) == len(all_subgroups(G2))
    assert sorted(map(len, conjugacy_classes(G))) == sorted(map(len, conjugacy_classes(G2)))


def test_permutation_closure_composition_order():
    # (1 2) then (2 3) composes to a 3-cycle in either convention; check g*h applies h first
    G = group_from_permutations([[2, 1, 3], [1, 3, 2]], 3)
    assert G.order == 6
