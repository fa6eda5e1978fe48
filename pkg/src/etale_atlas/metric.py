"""Metric groups ``(B, q)``: finite abelian groups with a Q/Z-valued quadratic form.

These are the pointed braided fusion categories; ``O(B, q)`` stands in for
their braided autoequivalences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import NotAbelian, NotQuadratic, TooLarge
from .groups import FiniteGroup, automorphisms, trivial_group

MAX_ORTHOGONAL_SEARCH = 64


@dataclass(frozen=True, eq=False)
class MetricGroup:
    B: FiniteGroup
    q: tuple[Fraction, ...]
    name: str = "A"

    @cached_property
    def denominator(self) -> int:
        return math.lcm(*(v.denominator for v in self.q))

    @cached_property
    def q_num(self) -> np.ndarray:
        """``q`` as integers over :attr:`denominator`."""
        L = self.denominator
        return np.array([int(v * L) for v in self.q], dtype=np.int64)

    @cached_property
    def b_num(self) -> np.ndarray:
        """Bilinear form ``b(x, y) = q(x+y) - q(x) - q(y)`` over :attr:`denominator`."""
        qn = self.q_num
        return (qn[self.B.table] - qn[:, None] - qn[None, :]) % self.denominator

    def b(self, x: int, y: int) -> Fraction:
        return Fraction(int(self.b_num[x, y]), self.denominator)

    @property
    def order(self) -> int:
        return self.B.order

    def is_trivial(self) -> bool:
        return self.B.order == 1

    def radical(self) -> list[int]:
        return [int(x) for x in np.nonzero(~self.b_num.any(axis=1))[0]]

    def to_text(self) -> str:
        lines = [f"metric {self.name}", f"group {self.B.name}"]
        lines.extend(f"{x} {v.numerator}/{v.denominator}" for x, v in enumerate(self.q) if v)
        return "\n".join(lines) + "\n"


def make_metric_group(B: FiniteGroup, q_values: Sequence, name: str = "A") -> MetricGroup:
    """Validate ``q`` as a quadratic form on the abelian group ``B``."""
    if not B.is_abelian:
        raise NotAbelian(f"{B.name} is not abelian")
    if len(q_values) != B.order:
        raise ValueError(f"need {B.order} values of q, got {len(q_values)}")
    q = tuple(Fraction(v) % 1 for v in q_values)
    m = MetricGroup(B, q, name)
    L = m.denominator
    qn = m.q_num
    t = B.table
    n = B.order
    if qn[0] % L:
        raise NotQuadratic("q(0) must vanish", (0,))
    inv = B.inverses
    for x in range(n):
        if qn[inv[x]] != qn[x]:
            raise NotQuadratic(f"q(-{x}) != q({x})", (x,))
    for x in range(n):
        y = 0
        for k in range(1, B.element_orders[x] + 1):
            y = int(t[y, x])
            if (qn[y] - k * k * qn[x]) % L:
                raise NotQuadratic(f"q({k}*{x}) != {k}^2 q({x})", (x, k))
    b = m.b_num
    lhs = b[t]  # b(x+y, z)
    rhs = (b[:, None, :] + b[None, :, :]) % L
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y, z = (int(v) for v in bad[0])
        raise NotQuadratic(f"b is not additive at ({x}, {y}, {z})", (x, y, z))
    return m


def trivial_metric_group() -> MetricGroup:
    return make_metric_group(trivial_group(), [0], name="Vect")


def is_nondegenerate(m: MetricGroup) -> bool:
    """True iff the radical of ``b`` is trivial."""
    return m.radical() == [0]


@dataclass(frozen=True, eq=False)
class OrthogonalGroup:
    metric: MetricGroup
    as_group: FiniteGroup
    action: np.ndarray  # action[s, x] = s(x)

    @property
    def order(self) -> int:
        return self.as_group.order


def orthogonal_group(m: MetricGroup) -> OrthogonalGroup:
    """Automorphisms of ``B`` preserving ``q``, as a table-backed group."""
    if m.B.order > MAX_ORTHOGONAL_SEARCH:
        raise TooLarge(f"orthogonal group search limited to |B| <= {MAX_ORTHOGONAL_SEARCH}")
    qn = m.q_num
    keep = [a.images for a in automorphisms(m.B) if (qn[list(a.images)] == qn).all()]
    keep.sort()
    action = np.array(keep, dtype=np.int64)
    index = {tuple(row): i for i, row in enumerate(keep)}
    k = len(keep)
    table = np.empty((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            table[i, j] = index[tuple(action[i][action[j]].tolist())]
    return OrthogonalGroup(m, FiniteGroup(table, f"O({m.name})"), action)


# ---------------------------------------------------------------------------
# Gauss sum, evaluated exactly in Z[zeta_L]


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial; coefficients low degree first."""
    num = list(num)
    dd = len(den) - 1
    if len(num) <= dd:
        return [0], num
    quo = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quo[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    return quo, num[:dd] or [0]


def cyclotomic(n: int) -> list[int]:
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic(d))
            assert not any(rem)
    return poly


def gauss_sum_check(m: MetricGroup) -> bool:
    """``|sum_x e(q(x))|^2 == |B|``, decided exactly.

    The square is the pair sum ``sum_{x,y} e(q(x) - q(y))``; it is an integer
    combination of ``L``-th roots of unity, reduced modulo the ``L``-th
    cyclotomic polynomial and compared with the constant ``|B|``.
    """
    L = m.denominator
    qn = m.q_num
    diffs = (qn[:, None] - qn[None, :]) % L
    counts = np.bincount(diffs.ravel(), minlength=L).tolist()
    _, rem = _poly_divmod(counts, cyclotomic(L))
    rem = rem + [0] * max(0, 1 - len(rem))
    return rem[0] == m.order and not any(rem[1:])
