"""Exact integer linear algebra: Smith normal form and solving over Q/Z.

The workhorse is :class:`SmithFactorization`.  It first eliminates with unit
pivots on a sparse dict-of-dicts copy of the matrix (bar differentials are
mostly +-1 entries, so this removes nearly all of the rank), then runs a
dense Smith reduction on whatever is left.  The pivot log is kept so that
solving and kernel coordinates never need the full transforms; those are
only materialized on request by :func:`smith_normal_form`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch

DENSE_THRESHOLD = 0.25
DENSE_CELLS = 250_000  # the density switch only applies to blocks this small


# ---------------------------------------------------------------------------
# Q/Z vectors


class QZVector:
    """Vector in ``(Q/Z)^n`` stored as integer numerators over one denominator.

    The common denominator is kept minimal, so ``den == 1`` means zero.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den: int = 1):
        den = int(den)
        if den < 1:
            raise ValueError("denominator must be positive")
        arr = np.asarray(num, dtype=object if den > (1 << 40) else np.int64)
        if arr.dtype == object:
            arr = np.array([int(v) % den for v in arr.tolist()], dtype=object)
        else:
            arr = arr % den
        g = den
        for v in np.unique(arr).tolist() if len(arr) else ():
            g = math.gcd(g, int(v))
            if g == 1:
                break
        if g > 1:
            arr = arr // g
            den //= g
        if arr.dtype == object and den <= (1 << 40):
            arr = arr.astype(np.int64)
        arr.setflags(write=False)
        self.num = arr
        self.den = den

    @classmethod
    def zeros(cls, n: int) -> "QZVector":
        return cls(np.zeros(n, dtype=np.int64), 1)

    @classmethod
    def from_fractions(cls, values: Iterable) -> "QZVector":
        fr = [Fraction(v) for v in values]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return cls([int(f * den) for f in fr], den)

    @property
    def entries(self) -> list[Fraction]:
        return [Fraction(int(v), self.den) for v in self.num.tolist()]

    def __len__(self) -> int:
        return len(self.num)

    def __getitem__(self, i) -> Fraction:
        return Fraction(int(self.num[i]), self.den)

    def is_zero(self) -> bool:
        return self.den == 1

    def _common(self, other: "QZVector"):
        if len(self) != len(other):
            raise DimensionMismatch(f"length {len(self)} vs {len(other)}")
        d = math.lcm(self.den, other.den)
        return self.num.astype(object) * (d // self.den), other.num.astype(object) * (d // other.den), d

    def __add__(self, other: "QZVector") -> "QZVector":
        a, b, d = self._common(other)
        return QZVector(a + b, d)

    def __sub__(self, other: "QZVector") -> "QZVector":
        a, b, d = self._common(other)
        return QZVector(a - b, d)

    def __neg__(self) -> "QZVector":
        return QZVector(-self.num.astype(object), self.den)

    def __mul__(self, k: int) -> "QZVector":
        return QZVector(self.num.astype(object) * int(k), self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, QZVector) and self.den == other.den
                and len(self) == len(other) and bool((self.num == other.num).all()))

    def __hash__(self) -> int:
        return hash((self.den, tuple(self.num.tolist())))

    def __repr__(self) -> str:
        shown = ", ".join(str(f) for f in self.entries[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"QZVector([{shown}{more}])"


# ---------------------------------------------------------------------------
# sparse integer matrices


class IntMatrix:
    """Sparse integer matrix stored as ``{row: {col: value}}`` with no zeros kept."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: dict[int, dict[int, int]] | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        self._data = {}
        for r, row in (data or {}).items():
            clean = {int(c): int(v) for c, v in row.items() if v}
            if clean:
                self._data[int(r)] = clean

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]]) -> "IntMatrix":
        """Build from ``(row, col, value)``; repeated positions are summed."""
        data: dict[int, dict[int, int]] = {}
        for r, c, v in triplets:
            r, c = int(r), int(c)
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatch(f"entry ({r}, {c}) outside {rows}x{cols}")
            row = data.setdefault(r, {})
            row[c] = row.get(c, 0) + int(v)
        return cls(rows, cols, data)

    @classmethod
    def from_arrays(cls, rows: int, cols: int, r: np.ndarray, c: np.ndarray, v: np.ndarray) -> "IntMatrix":
        return cls.from_triplets(rows, cols, zip(r.tolist(), c.tolist(), v.tolist()))

    @classmethod
    def from_dense(cls, a: Sequence[Sequence[int]]) -> "IntMatrix":
        a = [list(map(int, row)) for row in a]
        ncols = len(a[0]) if a else 0
        if any(len(row) != ncols for row in a):
            raise DimensionMismatch("ragged rows")
        return cls(len(a), ncols, {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(a)})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def density(self) -> float:
        cells = self.rows * self.cols
        return self.nnz / cells if cells else 0.0

    def row(self, i: int) -> dict[int, int]:
        return dict(self._data.get(i, {}))

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        return self._data.get(r, {}).get(c, 0)

    def triplets(self) -> list[tuple[int, int, int]]:
        return [(r, c, v) for r in sorted(self._data) for c, v in sorted(self._data[r].items())]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def transpose(self) -> "IntMatrix":
        data: dict[int, dict[int, int]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return IntMatrix(self.cols, self.rows, data)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        data: dict[int, dict[int, int]] = {}
        for r, row in self._data.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                for c, b in other._data.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + a * b
            data[r] = acc
        return IntMatrix(self.rows, other.cols, data)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        raise TypeError("IntMatrix is unhashable")

    def is_zero(self) -> bool:
        return not self._data

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def matvec(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.cols:
            raise DimensionMismatch(f"vector of length {len(x)} for {self.shape}")
        out = [0] * self.rows
        for r, row in self._data.items():
            out[r] = sum(v * int(x[c]) for c, v in row.items())
        return out

    def matvec_qz(self, x: QZVector) -> QZVector:
        """``M x`` reduced mod 1."""
        return QZVector(self.matvec([int(v) for v in x.num.tolist()]), x.den)


# ---------------------------------------------------------------------------
# Smith normal form


def _symmetric_quotient(a: int, p: int) -> int:
    """``q`` with ``|a - q p| <= |p|/2``."""
    q, r = divmod(a, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


def _dense_snf(A: list[list[int]], want_v: bool = True):
    """Dense Smith reduction in place.

    Returns ``(diag, row_log, V, Vinv)``.  Row operations are logged rather
    than accumulated, because the dense block is often far taller than wide:
    ``("swap", i, j)``, ``("add", i, j, q)`` meaning ``row_i -= q row_j``,
    and ``("neg", i)``.  ``V`` and ``Vinv`` are ``None`` unless requested.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    log: list[tuple] = []
    V = [[int(i == j) for j in range(n)] for i in range(n)] if want_v else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if want_v else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        log.append(("swap", i, j))

    def swap_cols(i, j, t):
        for r in range(t, m):
            row = A[r]
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_op(i, src, q, t):  # row_i -= q row_src, both zero left of column t
        ri, rs = A[i], A[src]
        for c in range(t, n):
            if rs[c]:
                ri[c] -= q * rs[c]
        log.append(("add", i, src, q))

    def col_op(j, t, q):  # col_j -= q col_t
        for r in range(t, m):
            row = A[r]
            if row[t]:
                row[j] -= q * row[t]
        if V is not None:
            for row in V:
                if row[t]:
                    row[j] -= q * row[t]
            vt, vj = Vi[t], Vi[j]
            for c in range(n):
                if vj[c]:
                    vt[c] += q * vj[c]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    row_op(i, t, _symmetric_quotient(a, p), t)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                a = A[t][j]
                if a:
                    col_op(j, t, _symmetric_quotient(a, p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t, t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull the offending row into row t; the next pass shrinks the pivot
            row_op(t, bad, -1, t)
        if A[t][t] < 0:
            A[t][t] = -A[t][t]
            log.append(("neg", t))
        diag.append(A[t][t])
        t += 1
    return diag, log, V, Vi


def _replay(log: Sequence[tuple], vec: list, modulus: int | None = None) -> None:
    """Apply a logged sequence of row operations to ``vec`` in place."""
    for op in log:
        kind = op[0]
        if kind == "add":
            _, i, j, q = op
            if vec[j]:
                vec[i] = vec[i] - q * vec[j]
                if modulus:
                    vec[i] %= modulus
        elif kind == "swap":
            _, i, j = op
            vec[i], vec[j] = vec[j], vec[i]
        else:
            vec[op[1]] = -vec[op[1]]


class SmithFactorization:
    """Smith decomposition of a sparse integer matrix, kept in factored form.

    Rows and columns split into three groups: unit pivots from the sparse
    phase, the dense remainder, and rows/columns that became zero.
    """

    def __init__(self, M: IntMatrix, dense_threshold: float = DENSE_THRESHOLD):
        self.shape = M.shape
        rows = {r: dict(row) for r, row in M._data.items()}
        cols: dict[int, set[int]] = {}
        for r, row in rows.items():
            for c in row:
                cols.setdefault(c, set()).add(r)
        nnz = sum(len(r) for r in rows.values())

        self.pivots: list[tuple[int, int, int, dict[int, int]]] = []
        self.row_ops: list[list[tuple[int, int]]] = []
        heap = [(len(s), c) for c, s in cols.items()]
        heapq.heapify(heap)
        while heap:
            cells = len(rows) * len(cols)
            if cells <= DENSE_CELLS and nnz > dense_threshold * cells:
                break
            cnt, c = heapq.heappop(heap)
            members = cols.get(c)
            if not members:
                continue
            if cnt != len(members):
                heapq.heappush(heap, (len(members), c))
                continue
            best = None
            for r in members:
                v = rows[r][c]
                if (v == 1 or v == -1) and (best is None or len(rows[r]) < best[0]):
                    best = (len(rows[r]), r)
            if best is None:
                continue  # re-queued if a later update touches this column
            r = best[1]
            prow = rows.pop(r)
            p = prow[c]
            nnz -= len(prow)
            for j in prow:
                s = cols[j]
                s.discard(r)
            others = cols.pop(c)
            ops = []
            touched = set()
            for i in others:
                row = rows[i]
                f = row.pop(c) * p
                nnz -= 1
                ops.append((i, f))
                for j, v in prow.items():
                    if j == c:
                        continue
                    old = row.get(j, 0)
                    nv = old - f * v
                    if nv:
                        row[j] = nv
                        if not old:
                            cols[j].add(i)
                            nnz += 1
                    elif old:
                        del row[j]
                        cols[j].discard(i)
                        nnz -= 1
                    touched.add(j)
                if not row:
                    del rows[i]
            for j in prow:
                if j != c and not cols.get(j, True):
                    del cols[j]
            for j in touched:
                if j in cols:
                    heapq.heappush(heap, (len(cols[j]), j))
            self.pivots.append((r, c, p, prow))
            self.row_ops.append(ops)

        pivot_rows = {piv[0] for piv in self.pivots}
        pivot_cols = {piv[1] for piv in self.pivots}
        self.dense_rows = sorted(rows)
        self.dense_cols = sorted(cols)
        dense_row_set = set(self.dense_rows)
        dense_col_set = set(self.dense_cols)
        self.zero_rows = [r for r in range(M.rows) if r not in pivot_rows and r not in dense_row_set]
        self.zero_cols = [c for c in range(M.cols) if c not in pivot_cols and c not in dense_col_set]
        cpos = {c: k for k, c in enumerate(self.dense_cols)}
        A = []
        for r in self.dense_rows:
            line = [0] * len(self.dense_cols)
            for c, v in rows[r].items():
                line[cpos[c]] = v
            A.append(line)
        self.dense_diag, self.dense_log, self.dense_V, self.dense_Vinv = _dense_snf(A)

    # -- summary data ------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.pivots) + len(self.dense_diag)

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries of the Smith form, in divisibility order."""
        return [1] * len(self.pivots) + list(self.dense_diag)

    def torsion_factors(self) -> list[int]:
        return [s for s in self.dense_diag if s > 1]

    # -- solving -----------------------------------------------------------

    def solve_qz(self, target: QZVector) -> QZVector | None:
        """Some ``x`` with ``M x = target (mod 1)``, or ``None`` if none exists."""
        if len(target) != self.shape[0]:
            raise DimensionMismatch(f"target of length {len(target)} for {self.shape}")
        F = math.lcm(*self.dense_diag) if self.dense_diag else 1
        D = target.den * F
        T = [int(v) * F for v in target.num.tolist()]
        for (r, _, _, _), ops in zip(self.pivots, self.row_ops):
            tr = T[r]
            if tr:
                for i, f in ops:
                    T[i] = (T[i] - f * tr) % D
        if any(T[r] % D for r in self.zero_rows):
            return None
        x = [0] * self.shape[1]
        V = self.dense_V
        td = [T[r] for r in self.dense_rows]
        _replay(self.dense_log, td, D)
        k = len(self.dense_diag)
        if any(v % D for v in td[k:]):
            return None
        psi = [td[a] % D // s for a, s in enumerate(self.dense_diag)]
        for b, c in enumerate(self.dense_cols):
            x[c] = sum(V[b][a] * psi[a] for a in range(k) if psi[a]) % D
        self._back_substitute(x, T, D)
        return QZVector(x, D)

    def _back_substitute(self, x: list[int], T: list[int] | None, modulus: int | None) -> None:
        for r, c, p, prow in reversed(self.pivots):
            acc = T[r] if T is not None else 0
            for j, v in prow.items():
                if j != c and x[j]:
                    acc -= v * x[j]
            acc *= p
            x[c] = acc % modulus if modulus else acc

    # -- kernel over Q/Z ---------------------------------------------------

    def torsion_kernel_generators(self) -> list[tuple[int, list[int]]]:
        """Pairs ``(s, X)`` with ``X/s`` of exact order ``s`` in ``ker(M) mod 1``.

        One pair per Smith factor ``s > 1``; these generate the torsion of the
        Q/Z-kernel modulo its divisible part.
        """
        out = []
        V = self.dense_V
        for a, s in enumerate(self.dense_diag):
            if s == 1:
                continue
            x = [0] * self.shape[1]
            for b, c in enumerate(self.dense_cols):
                x[c] = V[b][a]
            self._back_substitute(x, None, None)
            out.append((s, x))
        return out

    def torsion_coordinates(self, x: QZVector) -> list[Fraction]:
        """``s_i * (V^-1 x)_i`` for each factor ``s_i > 1``, as fractions mod ``s_i``.

        For ``x`` in the kernel mod 1 these are integers; the caller decides
        what a non-integer means.
        """
        if len(x) != self.shape[1]:
            raise DimensionMismatch(f"vector of length {len(x)} for {self.shape}")
        xd = [int(x.num[c]) for c in self.dense_cols]
        out = []
        for a, s in enumerate(self.dense_diag):
            if s == 1:
                continue
            y = sum(v * w for v, w in zip(self.dense_Vinv[a], xd) if v and w)
            out.append(Fraction(s * y, x.den) % s)
        return out

    # -- explicit transforms ---------------------------------------------

    def materialize(self) -> "SnfResult":
        m, n = self.shape
        # L: replay of the elimination row operations
        L = {i: {i: 1} for i in range(m)}
        for (r, _, _, _), ops in zip(self.pivots, self.row_ops):
            lr = L[r]
            for i, f in ops:
                li = L[i]
                for c, v in lr.items():
                    nv = li.get(c, 0) - f * v
                    if nv:
                        li[c] = nv
                    else:
                        li.pop(c, None)
        # column operations clearing the pivot rows, in pivot order
        Vc = {j: {j: 1} for j in range(n)}
        for r, c, p, prow in self.pivots:
            vc = Vc[c]
            for j, v in prow.items():
                if j == c:
                    continue
                f = v * p
                vj = Vc[j]
                for k, w in vc.items():
                    nv = vj.get(k, 0) - f * w
                    if nv:
                        vj[k] = nv
                    else:
                        vj.pop(k, None)

        U_rows = []
        for r, _, p, _ in self.pivots:
            U_rows.append({k: p * v for k, v in L[r].items()})
        dense = [dict(L[r]) for r in self.dense_rows]
        for op in self.dense_log:
            if op[0] == "add":
                _, i, j, q = op
                acc = dense[i]
                for k, v in dense[j].items():
                    nv = acc.get(k, 0) - q * v
                    if nv:
                        acc[k] = nv
                    else:
                        acc.pop(k, None)
            elif op[0] == "swap":
                _, i, j = op
                dense[i], dense[j] = dense[j], dense[i]
            else:
                dense[op[1]] = {k: -v for k, v in dense[op[1]].items()}
        U_rows.extend(dense)
        U_rows.extend(dict(L[r]) for r in self.zero_rows)

        V_cols = [dict(Vc[c]) for _, c, _, _ in self.pivots]
        nd = len(self.dense_cols)
        for a in range(nd):
            acc = {}
            for b, c in enumerate(self.dense_cols):
                w = self.dense_V[b][a]
                if w:
                    for k, v in Vc[c].items():
                        acc[k] = acc.get(k, 0) + w * v
            V_cols.append(acc)
        V_cols.extend(dict(Vc[c]) for c in self.zero_cols)

        U = IntMatrix(m, m, dict(enumerate(U_rows)))
        Vdata: dict[int, dict[int, int]] = {}
        for a, col in enumerate(V_cols):
            for k, v in col.items():
                Vdata.setdefault(k, {})[a] = v
        V = IntMatrix(n, n, Vdata)
        diag = self.invariant_factors
        S = IntMatrix(m, n, {i: {i: s} for i, s in enumerate(diag)})
        return SnfResult(U, S, V, len(diag))


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape))]


def smith_normal_form(M: IntMatrix) -> SnfResult:
    """Smith normal form with explicit unimodular transforms, ``U M V = S``."""
    return SmithFactorization(M).materialize()


def solve_qz(M: IntMatrix, target: QZVector) -> QZVector | None:
    """Solve ``M x = target`` over Q/Z; ``None`` when unsolvable."""
    if len(target) != M.rows:
        raise DimensionMismatch(f"target of length {len(target)} for {M.shape}")
    return SmithFactorization(M).solve_qz(target)


def solve_int(M: IntMatrix, b: Sequence[int]) -> tuple[list[int], list[list[int]]] | None:
    """Integer solution of ``M x = b`` plus a basis of the integer kernel.

    Returns ``None`` if no integer solution exists.
    """
    if len(b) != M.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {M.shape}")
    res = smith_normal_form(M)
    ub = res.U.matvec(b)
    y = [0] * M.cols
    for i, s in enumerate(res.diagonal[:res.rank]):
        if ub[i] % s:
            return None
        y[i] = ub[i] // s
    if any(ub[i] for i in range(res.rank, M.rows)):
        return None
    x = res.V.matvec(y)
    Vd = res.V.to_dense()
    kernel = [[Vd[r][k] for r in range(M.cols)] for k in range(res.rank, M.cols)]
    return x, kernel


def cokernel_invariants(M: IntMatrix, ambient_rank: int) -> list[int]:
    """Invariant factors of ``K / im(M)`` for a saturated lattice ``K`` of rank ``ambient_rank``.

    ``K`` is the kernel of the next map in a complex, so the torsion of
    ``K / im(M)`` is the torsion of ``coker(M)``.  Free summands appear as
    ``0`` entries after the torsion factors.
    """
    fac = SmithFactorization(M)
    if ambient_rank < fac.rank or ambient_rank > M.rows:
        raise DimensionMismatch(f"ambient rank {ambient_rank} incompatible with rank {fac.rank} in {M.rows} rows")
    return fac.torsion_factors() + [0] * (ambient_rank - fac.rank)
