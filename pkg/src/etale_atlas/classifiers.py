"""Enumerators for the finite data classifying étale and Lagrangian algebras.

Every enumerator walks subgroup conjugacy representatives ``H`` of ``G`` in
canonical order and returns a :class:`Classification` holding the admitted
records, the rejected ones (kept for auditing) and two counts: the number of
admitted records and the torsor-weighted total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .cohomology import (
    Cochain,
    apply_d,
    class_of,
    cohomology_group,
    inflation_preimage,
    is_cocycle,
    restrict,
    trivialize,
)
from .errors import NotACocycle
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    conjugacy_classes,
    group_label,
    homs_between,
    lift_subgroup,
    normal_subgroups_in,
    quotient_group,
    subgroup_conjugacy_reps,
)
from .metric import MetricGroup, is_nondegenerate, orthogonal_group
from .transgression import transgress, transgress3

COMPLETE = "COMPLETE"
SKELETON = "SKELETON"
UNVERIFIED_HIGHER_DATA = "UNVERIFIED_HIGHER_DATA"


@dataclass
class Classification:
    kind: str
    group: FiniteGroup
    records: list = field(default_factory=list)
    rejected: list = field(default_factory=list)
    entries: list = field(default_factory=list)  # both kinds, in enumeration order

    def add(self, rec, admitted: bool = True) -> None:
        self.entries.append(rec)
        (self.records if admitted else self.rejected).append(rec)

    @property
    def record_count(self) -> int:
        return len(self.records)

    @property
    def weighted_count(self) -> int:
        return sum(r.weight for r in self.records)

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def _twist(G: FiniteGroup, c: Cochain | None, degree: int) -> Cochain:
    if c is None:
        return Cochain.zero(G, degree)
    if c.group is not G or c.degree != degree:
        raise ValueError(f"expected a degree-{degree} cochain on {G.name}")
    if not is_cocycle(c):
        raise NotACocycle(f"degree-{degree} twist on {G.name} is not closed")
    return c


def _h(K: FiniteGroup, n: int) -> tuple[int, ...]:
    """Invariant factors of ``H^n(K)``; ``()`` for the trivial group."""
    if K.order == 1:
        return ()
    return cohomology_group(K, n).invariant_factors


def _restricted_class(c: Cochain, H: Subgroup) -> tuple[Cochain, tuple[int, ...]]:
    r = restrict(c, H)
    K = H.as_group
    if K.order == 1:
        return r, ()
    return r, class_of(r, cohomology_group(K, c.degree))


def _lifted(N: Subgroup, H: Subgroup) -> Subgroup:
    return N if N.parent is H.parent else lift_subgroup(N, H)


# ---------------------------------------------------------------------------
# Z_1(Vect^omega_G)


@dataclass(frozen=True, eq=False)
class LagrangianDatum1:
    H: Subgroup
    psi_rep: Cochain | None
    torsor: tuple[int, ...]
    restriction_class: tuple[int, ...]

    @property
    def admitted(self) -> bool:
        return self.psi_rep is not None

    @property
    def weight(self) -> int:
        return math.prod(self.torsor)

    def key(self) -> tuple:
        return (self.H.elements, self.torsor)


def enumerate_lagrangian1(G: FiniteGroup, omega: Cochain | None = None) -> Classification:
    """Pairs ``(H, psi)`` with ``d psi = omega|_H``, one record per admissible ``H``."""
    omega = _twist(G, omega, 3)
    out = Classification("lagrangian1", G)
    for H in subgroup_conjugacy_reps(G):
        r, cls = _restricted_class(omega, H)
        psi = trivialize(r) if not any(cls) else None
        rec = LagrangianDatum1(H, psi, _h(H.as_group, 2), cls)
        out.add(rec, rec.admitted)
    return out


@dataclass(frozen=True, eq=False)
class EtaleDatum1:
    H: Subgroup
    N: Subgroup  # subgroup of G contained in H
    phi_exists: bool
    phi_rep: Cochain | None
    phi_torsor: tuple[int, ...]
    extension_classes: tuple[tuple[int, ...], ...]
    quotient_h3: tuple[int, ...]

    @property
    def admitted(self) -> bool:
        return self.phi_exists and bool(self.extension_classes)

    @property
    def weight(self) -> int:
        return math.prod(self.phi_torsor) * len(self.extension_classes)

    def key(self) -> tuple:
        return (self.H.elements, self.N.elements)


def enumerate_etale1(G: FiniteGroup, omega: Cochain | None = None) -> Classification:
    """Tuples ``(H, N, phi, omega-bar)`` for every representative ``H`` and ``N`` normal in ``H``.

    The weight of an admitted record is ``|H^2(N)|`` times the number of
    extension classes on ``H/N``.
    """
    omega = _twist(G, omega, 3)
    out = Classification("etale1", G)
    for H in subgroup_conjugacy_reps(G):
        rH, clsH = _restricted_class(omega, H)
        normals = sorted(normal_subgroups_in(H), key=lambda N: _lifted(N, H).sort_key())
        for Nloc in normals:
            N = _lifted(Nloc, H)
            rN, clsN = _restricted_class(omega, N)
            phi = trivialize(rN) if not any(clsN) else None
            q = quotient_group(H, Nloc)
            Q = q.as_group
            if Q.order == 1:
                ext = ((),) if not any(clsH) else ()
            else:
                ext = tuple(inflation_preimage(clsH, q, 3))
            rec = EtaleDatum1(H, N, phi is not None, phi, _h(N.as_group, 2), ext, _h(Q, 3))
            out.add(rec, rec.admitted)
    return out


def lagrangian_slice(etale: Classification) -> list[EtaleDatum1]:
    """Admitted étale records with ``N = H``."""
    return [r for r in etale.records if r.N == r.H]


# ---------------------------------------------------------------------------
# Z_1(2Vect^pi_G), pointed sector


@dataclass(frozen=True, eq=False)
class LagrangianDatum2Pointed:
    H: Subgroup
    A: MetricGroup | None
    gamma: GroupHom | None
    trivialization_rep: Cochain | None
    trivialization_torsor: tuple[int, ...]
    restriction_class: tuple[int, ...]
    status: str = COMPLETE
    label: str = ""

    @property
    def admitted(self) -> bool:
        return self.trivialization_rep is not None

    @property
    def weight(self) -> int:
        return math.prod(self.trivialization_torsor)


def enumerate_lagrangian2_trivial_pointed(G: FiniteGroup, pi: Cochain | None = None) -> Classification:
    """Lagrangian algebras with ``A = Vect``: subgroups ``H`` with ``[pi|_H] = 0``.

    Each admitted record also names the bosonic fusion 2-category it gives.
    """
    pi = _twist(G, pi, 4)
    out = Classification("lagrangian2", G)
    center = f"Z1(2Vect^pi_{group_label(G)})"
    for H in subgroup_conjugacy_reps(G):
        r, cls = _restricted_class(pi, H)
        phi = trivialize(r) if not any(cls) else None
        K = H.as_group
        label = f"bosonic fusion 2-category (pointed sector, H={group_label(K)}) with center {center}"
        rec = LagrangianDatum2Pointed(H, None, None, phi, _h(K, 3), cls, COMPLETE, label)
        out.add(rec, rec.admitted)
    return out


@dataclass(frozen=True, eq=False)
class Etale2RepDatum:
    H: Subgroup
    A: MetricGroup
    gamma: GroupHom
    label: str
    weight: int = 1


def enumerate_etale_2rep_pointed(G: FiniteGroup, candidates: Sequence[MetricGroup]) -> Classification:
    """Triples ``(H, A, gamma: H -> O(A))`` over the candidate metric groups."""
    out = Classification("etale2rep", G)
    orth = [(A, orthogonal_group(A)) for A in candidates]
    for H in subgroup_conjugacy_reps(G):
        K = H.as_group
        for A, O in orth:
            for gamma in homs_between(K, O.as_group):
                label = f"Fun_{group_label(K)}({group_label(G)}, {A.name})"
                out.add(Etale2RepDatum(H, A, gamma, label))
    return out


@dataclass(frozen=True, eq=False)
class Etale2Skeleton:
    H: Subgroup
    N: Subgroup  # subgroup of G contained in H
    A: MetricGroup
    gamma: GroupHom
    pi_layer_note: str
    theta_admissible: bool | None
    trivialization_rep: Cochain | None
    trivialization_torsor: tuple[int, ...]

    @property
    def admitted(self) -> bool:
        return self.theta_admissible is not False

    @property
    def weight(self) -> int:
        return math.prod(self.trivialization_torsor) if self.theta_admissible else 1


def enumerate_etale2_skeleton(G: FiniteGroup, pi: Cochain | None, A: MetricGroup) -> Classification:
    """Skeleton ``(H, N, A, gamma)`` of connected étale algebras in ``Z1(2Vect^pi_G)``.

    For ``A`` trivial the remaining layer is the trivialization ``d phi = pi|_N``
    and is decided.  Otherwise records carry :data:`UNVERIFIED_HIGHER_DATA`.
    """
    pi = _twist(G, pi, 4)
    out = Classification("etale2", G)
    O = orthogonal_group(A)
    trivial_A = A.is_trivial()
    for H in subgroup_conjugacy_reps(G):
        K = H.as_group
        gammas = homs_between(K, O.as_group)
        normals = sorted(normal_subgroups_in(H), key=lambda N: _lifted(N, H).sort_key())
        for Nloc in normals:
            N = _lifted(Nloc, H)
            if trivial_A:
                rN, clsN = _restricted_class(pi, N)
                phi = trivialize(rN) if not any(clsN) else None
                ok = phi is not None
                note = f"[pi|_N]={'0' if ok else 'nonzero'} class={list(clsN)}"
                torsor = _h(N.as_group, 3)
            else:
                phi, ok, note, torsor = None, None, UNVERIFIED_HIGHER_DATA, ()
            for gamma in gammas:
                rec = Etale2Skeleton(H, N, A, gamma, note, ok, phi, torsor)
                out.add(rec, rec.admitted)
    return out


def lagrangian2_nontrivial_skeleton(G: FiniteGroup, pi: Cochain | None, A: MetricGroup) -> Classification:
    """``N = H`` slice of :func:`enumerate_etale2_skeleton`, kept only for non-degenerate ``A``."""
    sk = enumerate_etale2_skeleton(G, pi, A)
    out = Classification("lagrangian2-skeleton", G)
    nondeg = is_nondegenerate(A)
    for r in sk.entries:
        if r.N == r.H:
            out.add(r, nondeg and r.admitted)
    return out


# ---------------------------------------------------------------------------
# sectors of the Drinfeld center


@dataclass(frozen=True, eq=False)
class CenterSector:
    rep: int
    class_size: int
    centralizer: Subgroup
    twist_class: tuple[int, ...]
    twist_cochain: Cochain | None = None

    @property
    def twist_trivial(self) -> bool:
        return not any(self.twist_class)

    weight = 1


def center_sectors(G: FiniteGroup, twist: Cochain | None = None, degree: int = 3) -> Classification:
    """One sector per conjugacy class, with the transgressed twist on its centralizer."""
    if degree not in (3, 4):
        raise ValueError("sector decomposition is available in degrees 3 and 4")
    twist = _twist(G, twist, degree)
    out = Classification(f"center{degree}", G)
    step = transgress if degree == 4 else transgress3
    for cl in conjugacy_classes(G):
        res = step(twist, cl[0])
        out.add(CenterSector(cl[0], len(cl), res.centralizer, res.klass, res.cochain))
    return out


def check_trivialization(rep: Cochain, target: Cochain) -> bool:
    """``d rep == target`` exactly."""
    return apply_d(rep) == target
