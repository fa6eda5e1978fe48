from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from etale_atlas.cohomology import (
    Cochain,
    apply_d,
    class_of,
    cohomology_group,
    is_cocycle,
    trivialize,
)
from etale_atlas.errors import NotACocycle
from etale_atlas.groups import abelian, centralizer, conjugacy_classes, cyclic, small_groups, symmetric
from etale_atlas.transgression import conjugated_class, transgress, transgress3, transgress_cochain

from oracles import exhaustive_coboundaries

V = abelian(2, 2)


def shuffle_by_hand(c: Cochain, g: int) -> dict:
    """The alternating insertion formula, evaluated tuple by tuple."""
    Z = centralizer(c.group, g)
    n = c.degree
    out = {}
    for hs in itertools.product(Z.elements, repeat=n - 1):
        v = Fraction(0)
        for i in range(n):
            v += (-1) ** i * c(*(hs[:i] + (g,) + hs[i:]))
        out[hs] = v % 1
    return out


def as_dict(res) -> dict:
    Z = res.centralizer
    return {tuple(Z.elements[i] for i in loc): res.cochain(*loc)
            for loc in itertools.product(range(Z.order), repeat=res.cochain.degree)}


def test_zero_input_gives_zero():
    for g in range(4):
        assert transgress(Cochain.zero(V, 4), g).cochain.is_zero()
        assert transgress3(Cochain.zero(V, 3), g).cochain.is_zero()


@pytest.mark.parametrize("G", [V, symmetric(3), cyclic(4)], ids=["V", "S3", "Z4"])
def test_identity_element_vanishes(G):
    for gen in cohomology_group(G, 4).generators:
        assert transgress(gen, 0).cochain.is_zero()
    for gen in cohomology_group(G, 3).generators:
        assert transgress3(gen, 0).cochain.is_zero()


def test_v4_degree_four_classes():
    H4 = cohomology_group(V, 4)
    H3 = cohomology_group(V, 3)
    assert H4.invariant_factors == (2, 2)
    assert H3.invariant_factors == (2, 2, 2)
    got = {}
    for i, pi in enumerate(H4.generators):
        for g in (1, 2, 3):
            res = transgress(pi, g)
            assert res.centralizer.order == 4
            assert is_cocycle(res.cochain)
            assert res.klass == class_of(res.cochain, H3)
            assert as_dict(res) == shuffle_by_hand(pi, g)
            got[i, g] = res.klass
    # regression values for this generator basis; the exactness oracle below
    # confirms which of them, and which differences, are really nonzero
    assert got == {
        (0, 1): (0, 1, 0), (0, 2): (1, 1, 0), (0, 3): (1, 0, 0),
        (1, 1): (0, 1, 1), (1, 2): (0, 0, 1), (1, 3): (0, 1, 0),
    }


def test_v4_classes_agree_with_exhaustive_exactness():
    # H^2(V) = Z/2, so any 2-cochain whose coboundary has denominator 2 can be
    # shifted by a cocycle to one with denominator 4; k = 2 is enough
    B = exhaustive_coboundaries(V.table, 3, 2, max_power=2)
    res = [transgress(pi, g) for pi in cohomology_group(V, 4).generators for g in (1, 2, 3)]

    def exact(c: Cochain) -> bool:
        return tuple(int(v * 2) for v in c.values.entries) in B

    for a in res:
        assert exact(a.cochain) == (not any(a.klass))
        for b in res:
            assert exact(a.cochain - b.cochain) == (a.klass == b.klass)


def test_z2_degree_three_is_exact():
    G = cyclic(2)
    omega = cohomology_group(G, 3).generators[0]
    res = transgress3(omega, 1)
    # omega(1,1,1) - omega(1,1,1) + omega(1,1,1)
    assert res.cochain(1, 1) == omega(1, 1, 1) == Fraction(1, 2)
    assert res.klass == ()
    phi = trivialize(res.cochain)
    assert phi is not None and apply_d(phi) == res.cochain


def test_z4_degree_three_generator():
    G = cyclic(4)
    omega = cohomology_group(G, 3).generators[0]
    g = next(x for x in range(4) if G.element_orders[x] == 4)
    res = transgress3(omega, g)
    assert res.klass == ()
    assert trivialize(res.cochain) is not None
    assert as_dict(res) == shuffle_by_hand(omega, g)


def test_non_cocycle_rejected():
    bad = Cochain.from_dict(cyclic(3), 4, {(1, 1, 1, 1): Fraction(1, 3)})
    assert not is_cocycle(bad)
    with pytest.raises(NotACocycle):
        transgress(bad, 1)
    with pytest.raises(ValueError):
        transgress3(Cochain.zero(cyclic(2), 4), 1)


def test_linearity_on_classes():
    pis = cohomology_group(V, 4).generators
    H3 = cohomology_group(V, 3)
    for g in range(4):
        a = transgress(pis[0], g).klass
        b = transgress(pis[1], g).klass
        s = transgress(pis[0] + pis[1], g).klass
        assert s == tuple((x + y) % f for x, y, f in zip(a, b, H3.invariant_factors))


ORDER8 = small_groups(8)


@pytest.mark.parametrize("G", ORDER8, ids=[G.name for G in ORDER8])
def test_degree_three_properties(G):
    rng = np.random.default_rng(G.order)
    for omega in cohomology_group(G, 3).generators:
        for cl in conjugacy_classes(G):
            res = transgress3(omega, cl[0])
            assert is_cocycle(res.cochain)
            for x in range(G.order):
                a, b = conjugated_class(omega, cl[0], x)
                assert a == b
    eta = Cochain.random(G, 2, rng)
    for g in range(G.order):
        assert trivialize(transgress_cochain(apply_d(eta), g)) is not None


def test_conjugation_equivariance_s3():
    G = symmetric(3)
    for pi in cohomology_group(G, 4).generators:
        for g in range(6):
            for x in range(6):
                a, b = conjugated_class(pi, g, x)
                assert a == b
