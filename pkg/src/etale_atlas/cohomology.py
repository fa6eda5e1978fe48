"""Normalized bar-complex cohomology ``H^n(G; Q/Z)`` with trivial action.

A degree-``n`` cochain is a vector indexed by tuples ``(g1, ..., gn)`` of
non-identity elements in lexicographic order: the tuple has index
``sum((g_i - 1) * k**(n - i))`` with ``k = |G| - 1``.  Tuples containing the
identity are implicitly zero.

``H^n(G; Q/Z)`` is read off the Smith form of the single differential
``d^n : C^n -> C^(n+1)``: its factors ``s > 1`` are the invariant factors,
and the matching kernel vectors divided by ``s`` are the representatives.
This works because the divisible part of the cocycles is exactly the
coboundaries (``H^n(G; Q/Z) = H^(n+1)(G; Z)`` is finite).
"""

from __future__ import annotations

import math
import os
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .errors import InternalInconsistency, NotACocycle, TooLarge, WrongParent
from .groups import FiniteGroup, QuotientGroup, Subgroup
from .zlinalg import IntMatrix, QZVector, SmithFactorization, solve_int

MAX_DEGREE = 5
DEFAULT_BUDGET = 2_000_000


def budget() -> int:
    """Largest bar-complex dimension we are willing to allocate (``ETALE_ATLAS_BUDGET``)."""
    raw = os.environ.get("ETALE_ATLAS_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _check_budget(G: FiniteGroup, n: int) -> None:
    size = (G.order - 1) ** n
    if size > budget():
        raise TooLarge(f"C^{n}({G.name}) has {size} coordinates, above the budget of {budget()}")


# ---------------------------------------------------------------------------
# index helpers


def tuple_grid(order: int, n: int) -> np.ndarray:
    """All normalized ``n``-tuples as an array of shape ``(k**n, n)``, lexicographic."""
    k = order - 1
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.indices((k,) * n, dtype=np.int64).reshape(n, -1).T
    return idx + 1


def tuple_index(order: int, tuples: np.ndarray) -> np.ndarray:
    """Normalized index of each row; ``-1`` where a row contains the identity."""
    k = order - 1
    n = tuples.shape[1]
    out = np.zeros(tuples.shape[0], dtype=np.int64)
    for i in range(n):
        out = out * k + (tuples[:, i] - 1)
    if n:
        out[(tuples == 0).any(axis=1)] = -1
    return out


def _full_values(c: "Cochain") -> np.ndarray:
    """Values on all of ``G^n`` (flattened, base ``|G|``), zero off the normalized tuples."""
    N, n = c.group.order, c.degree
    full = np.zeros(N ** n, dtype=np.int64)
    grid = tuple_grid(N, n)
    pos = np.zeros(grid.shape[0], dtype=np.int64)
    for i in range(n):
        pos = pos * N + grid[:, i]
    full[pos] = c.values.num
    return full


def _full_index(order: int, tuples: np.ndarray) -> np.ndarray:
    out = np.zeros(tuples.shape[0], dtype=np.int64)
    for i in range(tuples.shape[1]):
        out = out * order + tuples[:, i]
    return out


def _bar_terms(G: FiniteGroup, n: int):
    """For ``d^n``: yield ``(sign, argument tuples)`` for the ``n + 2`` face terms over all normalized ``(n+1)``-tuples."""
    grid = tuple_grid(G.order, n + 1)
    t = G.table
    yield 1, grid[:, 1:]
    for i in range(n):
        merged = t[grid[:, i], grid[:, i + 1]]
        yield (-1) ** (i + 1), np.column_stack([grid[:, :i], merged, grid[:, i + 2:]])
    yield (-1) ** (n + 1), grid[:, :n]


# ---------------------------------------------------------------------------
# cochains


@dataclass(frozen=True, eq=False)
class Cochain:
    """Normalized ``Q/Z``-valued cochain of a given degree on ``group``."""

    group: FiniteGroup
    degree: int
    values: QZVector

    def __post_init__(self):
        expected = (self.group.order - 1) ** self.degree
        if len(self.values) != expected:
            raise ValueError(f"degree-{self.degree} cochain on order {self.group.order} needs {expected} values")

    @classmethod
    def zero(cls, G: FiniteGroup, n: int) -> "Cochain":
        return cls(G, n, QZVector.zeros((G.order - 1) ** n))

    @classmethod
    def from_function(cls, G: FiniteGroup, n: int, f) -> "Cochain":
        vals = [Fraction(f(*tup)) for tup in tuple_grid(G.order, n).tolist()]
        return cls(G, n, QZVector.from_fractions(vals))

    @classmethod
    def from_dict(cls, G: FiniteGroup, n: int, values: dict[tuple[int, ...], Fraction]) -> "Cochain":
        k = G.order - 1
        vals = [Fraction(0)] * (k ** n)
        for tup, v in values.items():
            if len(tup) != n or any(not 0 < g < G.order for g in tup):
                raise ValueError(f"bad tuple {tup} for a normalized degree-{n} cochain")
            vals[int(tuple_index(G.order, np.array([tup]))[0])] = Fraction(v)
        return cls(G, n, QZVector.from_fractions(vals))

    @classmethod
    def random(cls, G: FiniteGroup, n: int, rng: np.random.Generator, den: int | None = None) -> "Cochain":
        den = den or G.order * 2
        return cls(G, n, QZVector(rng.integers(0, den, size=(G.order - 1) ** n), den))

    def __call__(self, *args: int) -> Fraction:
        if len(args) != self.degree:
            raise ValueError(f"expected {self.degree} arguments")
        if any(a == 0 for a in args):
            return Fraction(0)
        return self.values[int(tuple_index(self.group.order, np.array([args]))[0])]

    def items(self):
        """Nonzero ``(tuple, value)`` pairs in index order."""
        grid = tuple_grid(self.group.order, self.degree)
        for i in np.nonzero(self.values.num)[0].tolist():
            yield tuple(int(g) for g in grid[i]), self.values[i]

    def _same(self, other: "Cochain") -> None:
        if other.group is not self.group or other.degree != self.degree:
            raise WrongParent("cochains live on different groups or degrees")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.group, self.degree, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.group, self.degree, self.values - other.values)

    def __neg__(self) -> "Cochain":
        return Cochain(self.group, self.degree, -self.values)

    def __mul__(self, k: int) -> "Cochain":
        return Cochain(self.group, self.degree, self.values * k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and other.group is self.group
                and other.degree == self.degree and other.values == self.values)

    def __hash__(self) -> int:
        return hash((id(self.group), self.degree, self.values))

    def is_zero(self) -> bool:
        return self.values.is_zero()

    def __repr__(self) -> str:
        return f"Cochain({self.group.name}, degree={self.degree}, den={self.values.den})"


def coboundary_matrix(G: FiniteGroup, n: int) -> IntMatrix:
    """Integer matrix of ``d^n : C^n -> C^(n+1)`` on normalized cochains."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    _check_budget(G, n + 1)
    N = G.order
    rows_n = (N - 1) ** (n + 1)
    cols_n = (N - 1) ** n
    if rows_n == 0 or n == 0:
        return IntMatrix.zeros(rows_n, cols_n)
    r_all, c_all, v_all = [], [], []
    rows = np.arange(rows_n, dtype=np.int64)
    for sign, args in _bar_terms(G, n):
        col = tuple_index(N, args)
        keep = col >= 0
        r_all.append(rows[keep])
        c_all.append(col[keep])
        v_all.append(np.full(int(keep.sum()), sign, dtype=np.int64))
    r = np.concatenate(r_all)
    c = np.concatenate(c_all)
    v = np.concatenate(v_all)
    # merge repeated (row, col) pairs before handing over to the sparse type
    key = r * cols_n + c
    order = np.argsort(key, kind="stable")
    key, v = key[order], v[order]
    uniq, start = np.unique(key, return_index=True)
    sums = np.add.reduceat(v, start) if len(v) else v
    nz = sums != 0
    uniq, sums = uniq[nz], sums[nz]
    data: dict[int, dict[int, int]] = {}
    for kk, s in zip(uniq.tolist(), sums.tolist()):
        rr, cc = divmod(kk, cols_n)
        data.setdefault(rr, {})[cc] = s
    M = IntMatrix(rows_n, cols_n)
    M._data = data
    return M


def apply_d(c: Cochain) -> Cochain:
    """Coboundary ``dc`` computed directly from the bar formula."""
    G, n = c.group, c.degree
    _check_budget(G, n + 1)
    N = G.order
    rows_n = (N - 1) ** (n + 1)
    if n == 0 or rows_n == 0:
        return Cochain.zero(G, n + 1)
    full = _full_values(c)
    acc = np.zeros(rows_n, dtype=np.int64)
    for sign, args in _bar_terms(G, n):
        acc += sign * full[_full_index(N, args)]
    return Cochain(G, n + 1, QZVector(acc, c.values.den))


def is_cocycle(c: Cochain) -> bool:
    return apply_d(c).is_zero()


def restrict(c: Cochain, H: Subgroup) -> Cochain:
    """Pull back along the inclusion ``H -> G``."""
    if H.parent is not c.group:
        raise WrongParent("cochain and subgroup have different parent groups")
    K = H.as_group
    if K is c.group:
        return c
    grid = tuple_grid(K.order, c.degree)
    idx = tuple_index(c.group.order, H.embed[grid]) if c.degree else np.zeros(1, dtype=np.int64)
    return Cochain(K, c.degree, QZVector(c.values.num[idx], c.values.den))


def pullback(c: Cochain, f: Sequence[int], domain: FiniteGroup) -> Cochain:
    """Pull back along a homomorphism ``domain -> c.group`` given by its image array."""
    f = np.asarray(f, dtype=np.int64)
    full = _full_values(c)
    grid = tuple_grid(domain.order, c.degree)
    vals = full[_full_index(c.group.order, f[grid])] if c.degree else c.values.num
    return Cochain(domain, c.degree, QZVector(vals, c.values.den))


def inflate(c: Cochain, q: QuotientGroup) -> Cochain:
    """Pull back along the projection ``H -> H/N``."""
    if c.group is not q.as_group:
        raise WrongParent("cochain does not live on the quotient group")
    return pullback(c, q.project, q.source.as_group)


# ---------------------------------------------------------------------------
# cohomology groups

_factorizations: "weakref.WeakKeyDictionary[FiniteGroup, dict[int, SmithFactorization]]" = weakref.WeakKeyDictionary()
_groups: "weakref.WeakKeyDictionary[FiniteGroup, dict[int, CohomologyGroup]]" = weakref.WeakKeyDictionary()


def differential_factorization(G: FiniteGroup, n: int) -> SmithFactorization:
    """Cached Smith factorization of ``d^n`` on ``G``."""
    cache = _factorizations.setdefault(G, {})
    if n not in cache:
        cache[n] = SmithFactorization(coboundary_matrix(G, n))
    return cache[n]


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """``H^n(G; Q/Z)`` as invariant factors with one cocycle per factor."""

    group: FiniteGroup
    degree: int
    invariant_factors: tuple[int, ...]
    generators: tuple[Cochain, ...]
    _fac: SmithFactorization = field(repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def __len__(self) -> int:
        return self.order

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def label(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{f}" for f in self.invariant_factors)

    def elements(self):
        """All exponent vectors, lexicographically."""
        return product(*(range(f) for f in self.invariant_factors))

    def cocycle(self, exponents: Sequence[int]) -> Cochain:
        """The representative ``sum e_i * gen_i``."""
        out = Cochain.zero(self.group, self.degree)
        for e, g in zip(exponents, self.generators):
            if e:
                out = out + g * e
        return out


def cohomology_group(G: FiniteGroup, n: int) -> CohomologyGroup:
    """``H^n(G; Q/Z)`` for ``1 <= n <= 5``."""
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree must lie in 1..{MAX_DEGREE}")
    cache = _groups.setdefault(G, {})
    if n in cache:
        return cache[n]
    fac = differential_factorization(G, n)
    prev = differential_factorization(G, n - 1)
    free = (G.order - 1) ** n - fac.rank - prev.rank
    if free != 0:
        raise InternalInconsistency(f"H^{n}({G.name}) shows free rank {free}")
    gens = []
    factors = []
    for s, x in fac.torsion_kernel_generators():
        if G.order % s:
            raise InternalInconsistency(f"invariant factor {s} of H^{n}({G.name}) does not divide |G|")
        factors.append(s)
        gens.append(Cochain(G, n, QZVector(x, s)))
    H = CohomologyGroup(G, n, tuple(factors), tuple(gens), fac)
    cache[n] = H
    return H


def class_of(c: Cochain, basis: CohomologyGroup) -> tuple[int, ...]:
    """Coordinates of ``[c]`` in ``basis``, each reduced mod its factor."""
    if c.group is not basis.group or c.degree != basis.degree:
        raise WrongParent("cocycle and cohomology basis do not match")
    if not is_cocycle(c):
        raise NotACocycle(f"degree-{c.degree} cochain on {c.group.name} is not closed")
    coords = basis._fac.torsion_coordinates(c.values)
    out = []
    for y, f in zip(coords, basis.invariant_factors):
        if y.denominator != 1:
            raise InternalInconsistency("non-integral class coordinate for a cocycle")
        out.append(int(y) % f)
    return tuple(out)


def trivialize(c: Cochain, must_be_cocycle: bool = True) -> Cochain | None:
    """Some ``phi`` with ``d phi = c``, or ``None`` when ``[c] != 0``."""
    if c.degree == 0:
        raise ValueError("there are no cochains below degree 0")
    if must_be_cocycle and not is_cocycle(c):
        raise NotACocycle(f"degree-{c.degree} cochain on {c.group.name} is not closed")
    G = c.group
    if c.is_zero():
        return Cochain.zero(G, c.degree - 1)
    x = differential_factorization(G, c.degree - 1).solve_qz(c.values)
    if x is None:
        return None
    return Cochain(G, c.degree - 1, x)


def is_coboundary(c: Cochain) -> bool:
    return trivialize(c, must_be_cocycle=False) is not None


def inflation_matrix(q: QuotientGroup, n: int) -> list[tuple[int, ...]]:
    """Columns: class in ``H^n(H)`` of the inflation of each ``H^n(H/N)`` generator."""
    HH = cohomology_group(q.source.as_group, n)
    HQ = cohomology_group(q.as_group, n)
    return [class_of(inflate(g, q), HH) for g in HQ.generators]


def inflation_preimage(target: Sequence[int], q: QuotientGroup, n: int) -> list[tuple[int, ...]]:
    """All classes on ``H/N`` whose inflation has class ``target`` on ``H``."""
    HH = cohomology_group(q.source.as_group, n)
    HQ = cohomology_group(q.as_group, n)
    target = tuple(int(t) % f for t, f in zip(target, HH.invariant_factors))
    if len(target) != len(HH.invariant_factors):
        raise ValueError("target class has the wrong length")
    cols = inflation_matrix(q, n)
    fq = HQ.invariant_factors
    fh = HH.invariant_factors
    K, J = len(fq), len(fh)
    if J == 0:
        return sorted(HQ.elements())
    if K == 0:
        return [()] if not any(target) else []
    # sum_k a_k cols[k][j] + f_j z_j = target_j over the integers
    M = IntMatrix.from_dense([[cols[k][j] for k in range(K)] + [fh[j] * (i == j) for i in range(J)]
                              for j in range(J)])
    sol = solve_int(M, list(target))
    if sol is None:
        return []
    x, kernel = sol
    base = tuple(x[k] % fq[k] for k in range(K))
    gens = {tuple(v[k] % fq[k] for k in range(K)) for v in kernel}
    gens.discard((0,) * K)
    sub = {(0,) * K}
    frontier = list(sub)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple((u + v) % f for u, v, f in zip(a, g, fq))
                if b not in sub:
                    sub.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(tuple((u + v) % f for u, v, f in zip(base, s, fq)) for s in sub)
