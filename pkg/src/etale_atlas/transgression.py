"""Loop transgression ``tau_g : H^n(G) -> H^(n-1)(Z(g))`` for ``n = 3, 4``.

The cochain formula inserts ``g`` into every slot with alternating signs,

    tau_g(c)(h_1, ..., h_{n-1}) = sum_i (-1)^i c(h_1, ..., h_i, g, h_{i+1}, ...)

evaluated only on tuples from the centralizer.  For ``n = 3`` this is the
familiar ``w(g,h,k) - w(h,g,k) + w(h,k,g)``.  Every output is checked to be
closed before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cohomology import (
    Cochain,
    _full_index,
    _full_values,
    class_of,
    cohomology_group,
    is_cocycle,
    pullback,
    tuple_grid,
)
from .errors import InternalInconsistency, NotACocycle
from .groups import FiniteGroup, Subgroup, centralizer
from .zlinalg import QZVector


@dataclass(frozen=True, eq=False)
class TransgressionResult:
    element: int
    centralizer: Subgroup
    cochain: Cochain
    klass: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.klass)


def transgress_cochain(c: Cochain, g: int, Z: Subgroup | None = None) -> Cochain:
    """The shuffle formula on ``Z(g)``, without any closedness checks."""
    G = c.group
    n = c.degree
    if Z is None:
        Z = centralizer(G, g)
    K = Z.as_group
    grid = Z.embed[tuple_grid(K.order, n - 1)]
    full = _full_values(c)
    acc = np.zeros(grid.shape[0], dtype=np.int64)
    col = np.full((grid.shape[0], 1), g, dtype=np.int64)
    for i in range(n):
        args = np.hstack([grid[:, :i], col, grid[:, i:]])
        acc += (-1) ** i * full[_full_index(G.order, args)]
    return Cochain(K, n - 1, QZVector(acc, c.values.den))


def _transgress(c: Cochain, g: int, degree: int) -> TransgressionResult:
    if c.degree != degree:
        raise ValueError(f"expected a degree-{degree} cochain, got degree {c.degree}")
    if not 0 <= g < c.group.order:
        raise ValueError(f"element {g} outside the group")
    if not is_cocycle(c):
        raise NotACocycle(f"degree-{degree} input on {c.group.name} is not closed")
    Z = centralizer(c.group, g)
    out = transgress_cochain(c, g, Z)
    if not is_cocycle(out):
        raise InternalInconsistency(f"transgression at element {g} produced a non-closed cochain")
    klass = class_of(out, cohomology_group(Z.as_group, degree - 1))
    return TransgressionResult(g, Z, out, klass)


def transgress(pi: Cochain, g: int) -> TransgressionResult:
    """``tau_g`` on a 4-cocycle: a 3-cocycle on the centralizer of ``g``."""
    return _transgress(pi, g, 4)


def transgress3(omega: Cochain, g: int) -> TransgressionResult:
    """``tau_g`` on a 3-cocycle: a 2-cocycle on the centralizer of ``g``."""
    return _transgress(omega, g, 3)


def conjugated_class(c: Cochain, g: int, x: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Compare ``tau_g(c)`` with ``tau_{x g x^-1}(c)`` pulled back along conjugation by ``x``.

    Returns both classes in ``H^(n-1)(Z(g))``; they agree when the twists of
    conjugate sectors are equivalent.
    """
    G: FiniteGroup = c.group
    Zg = centralizer(G, g)
    g2 = G.conj(x, g)
    Zg2 = centralizer(G, g2)
    K = Zg.as_group
    t1 = transgress_cochain(c, g, Zg)
    t2 = transgress_cochain(c, g2, Zg2)
    # conjugation Z(g) -> Z(g'), in local indices of the two subgroups
    images = [Zg2.index_of[G.conj(x, h)] for h in Zg.elements]
    pulled = pullback(t2, images, K)
    basis = cohomology_group(K, c.degree - 1)
    return class_of(t1, basis), class_of(pulled, basis)
