"""Line-oriented text formats for groups, cocycles and metric groups.

Blank lines and lines starting with ``#`` are ignored everywhere; reported
line numbers refer to the original file.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np

from .cohomology import Cochain
from .errors import InputError, MalformedSpec, TooLarge
from .groups import FiniteGroup, builtin_group, group_from_permutations
from .metric import MetricGroup, make_metric_group

MAX_FILE_ORDER = 2 ** 16


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            out.append((no, s.split()))
    return out


def _int(tok: str, path, line) -> int:
    try:
        return int(tok)
    except ValueError:
        raise MalformedSpec(f"expected an integer, got {tok!r}", path=path, line=line) from None


def _fraction(tok: str, path, line) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise MalformedSpec(f"expected a fraction num/den, got {tok!r}", path=path, line=line) from None


def _expect(lines, i: int, keyword: str, nargs: int, path) -> list[str]:
    if i >= len(lines):
        raise MalformedSpec(f"missing '{keyword}' line", path=path)
    no, toks = lines[i]
    if toks[0] != keyword or len(toks) != nargs + 1:
        raise MalformedSpec(f"expected '{keyword}' with {nargs} argument(s)", path=path, line=no)
    return toks[1:]


# ---------------------------------------------------------------------------
# groups


def parse_group(text: str, path: str | None = None) -> FiniteGroup:
    lines = _lines(text)
    (name,) = _expect(lines, 0, "group", 1, path)
    (n_tok,) = _expect(lines, 1, "order", 1, path)
    n = _int(n_tok, path, lines[1][0])
    if n < 1:
        raise MalformedSpec("order must be positive", path=path, line=lines[1][0])
    if n > MAX_FILE_ORDER:
        raise TooLarge(f"order {n} exceeds {MAX_FILE_ORDER}")
    if len(lines) < 3:
        raise MalformedSpec("missing 'table' or 'perm' section", path=path)
    no, toks = lines[2]
    if toks == ["table"]:
        rows = lines[3:]
        if len(rows) != n:
            raise MalformedSpec(f"table needs {n} rows, found {len(rows)}", path=path, line=no)
        table = np.empty((n, n), dtype=np.int64)
        for r, (rno, rtoks) in enumerate(rows):
            if len(rtoks) != n:
                raise MalformedSpec(f"row needs {n} entries", path=path, line=rno)
            vals = [_int(t, path, rno) for t in rtoks]
            if any(not 0 <= v < n for v in vals):
                raise MalformedSpec(f"entries must lie in 0..{n - 1}", path=path, line=rno)
            table[r] = vals
        return FiniteGroup(table, name)
    if toks[0] == "perm" and len(toks) == 2:
        degree = _int(toks[1], path, no)
        if degree < 1:
            raise MalformedSpec("degree must be positive", path=path, line=no)
        gens = []
        for gno, gtoks in lines[3:]:
            if len(gtoks) != degree:
                raise MalformedSpec(f"generator needs {degree} images", path=path, line=gno)
            img = [_int(t, path, gno) for t in gtoks]
            if sorted(img) != list(range(1, degree + 1)):
                raise MalformedSpec(f"not a permutation of 1..{degree}", path=path, line=gno)
            gens.append(img)
        G = group_from_permutations(gens, degree, name)
        if G.order != n:
            raise MalformedSpec(f"generators produce a group of order {G.order}, header says {n}",
                                path=path, line=lines[1][0])
        return G
    raise MalformedSpec("expected 'table' or 'perm <degree>'", path=path, line=no)


def load_group(spec: str) -> FiniteGroup:
    """Read a group file, or resolve a built-in name like ``S3`` when no such file exists."""
    p = Path(spec)
    if p.is_file():
        return parse_group(p.read_text(encoding="utf-8"), str(p))
    G = builtin_group(spec)
    if G is None:
        raise InputError(f"no group file or built-in group named {spec!r}")
    return G


# ---------------------------------------------------------------------------
# cocycles


def parse_cocycle(text: str, G: FiniteGroup, path: str | None = None) -> tuple[str, Cochain]:
    """Returns ``(name, cochain)``; the header's group name must match ``G.name``."""
    lines = _lines(text)
    if not lines:
        raise MalformedSpec("empty cocycle file", path=path)
    no, toks = lines[0]
    if len(toks) != 6 or toks[0] != "cocycle" or toks[2] != "degree" or toks[4] != "group":
        raise MalformedSpec("expected 'cocycle <name> degree <n> group <groupname>'", path=path, line=no)
    name, n, gname = toks[1], _int(toks[3], path, no), toks[5]
    if n < 0:
        raise MalformedSpec("degree must be non-negative", path=path, line=no)
    if gname != G.name:
        raise MalformedSpec(f"cocycle is on group {gname!r}, expected {G.name!r}", path=path, line=no)
    values: dict[tuple[int, ...], Fraction] = {}
    for vno, vtoks in lines[1:]:
        if len(vtoks) != n + 1:
            raise MalformedSpec(f"expected {n} element indices and a value", path=path, line=vno)
        tup = tuple(_int(t, path, vno) for t in vtoks[:n])
        if any(not 0 <= g < G.order for g in tup):
            raise MalformedSpec(f"element index outside 0..{G.order - 1}", path=path, line=vno)
        if 0 in tup:
            raise MalformedSpec("tuples containing the identity 0 are not allowed", path=path, line=vno)
        if tup in values:
            raise MalformedSpec(f"duplicate tuple {tup}", path=path, line=vno)
        values[tup] = _fraction(vtoks[n], path, vno)
    return name, Cochain.from_dict(G, n, values)


def format_cocycle(c: Cochain, name: str = "c", group_name: str | None = None) -> str:
    lines = [f"cocycle {name} degree {c.degree} group {group_name or c.group.name}"]
    for tup, v in c.items():
        lines.append(" ".join(map(str, tup)) + f" {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def cocycle_blocks(text: str) -> dict[str, str]:
    """Cocycle listings embedded in a report, keyed by name.

    A block starts at a ``cocycle`` header line and runs to the next blank line.
    """
    blocks: dict[str, str] = {}
    cur: list[str] = []
    for raw in text.splitlines() + [""]:
        s = raw.strip()
        if s.startswith("cocycle ") and len(s.split()) > 1:
            cur = [s]
        elif cur and s:
            cur.append(s)
        elif cur:
            blocks[cur[0].split()[1]] = "\n".join(cur) + "\n"
            cur = []
    return blocks


def load_cocycle(spec: str, G: FiniteGroup) -> tuple[str, Cochain]:
    """Read a cocycle file.  ``report.txt::gen2`` selects a block of a report."""
    path, _, block = spec.partition("::")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read cocycle file: {e.strerror}", path=path) from None
    if block:
        blocks = cocycle_blocks(text)
        if block not in blocks:
            raise InputError(f"no cocycle named {block!r}", path=path)
        text = blocks[block]
    return parse_cocycle(text, G, path)


# ---------------------------------------------------------------------------
# metric groups


def parse_metric(text: str, path: str | None = None, B: FiniteGroup | None = None) -> MetricGroup:
    """Parse a metric file.  ``B`` defaults to the group named in the file,
    looked up as ``<groupname>.grp`` beside the file and then as a built-in."""
    lines = _lines(text)
    (name,) = _expect(lines, 0, "metric", 1, path)
    (gname,) = _expect(lines, 1, "group", 1, path)
    if B is None:
        B = _resolve_group(gname, path, lines[1][0])
    q = [Fraction(0)] * B.order
    seen = set()
    for no, toks in lines[2:]:
        if len(toks) != 2:
            raise MalformedSpec("expected '<element> <num/den>'", path=path, line=no)
        x = _int(toks[0], path, no)
        if not 0 <= x < B.order:
            raise MalformedSpec(f"element index outside 0..{B.order - 1}", path=path, line=no)
        if x in seen:
            raise MalformedSpec(f"duplicate element {x}", path=path, line=no)
        seen.add(x)
        q[x] = _fraction(toks[1], path, no)
    return make_metric_group(B, q, name)


def _resolve_group(gname: str, path: str | None, line: int) -> FiniteGroup:
    if path is not None:
        candidate = Path(path).with_name(f"{gname}.grp")
        if candidate.is_file():
            return parse_group(candidate.read_text(encoding="utf-8"), str(candidate))
    G = builtin_group(gname)
    if G is None:
        raise MalformedSpec(f"cannot resolve group {gname!r}", path=path, line=line)
    return G


def load_metric(path: str) -> MetricGroup:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read metric file: {e.strerror}", path=path) from None
    return parse_metric(text, path)
