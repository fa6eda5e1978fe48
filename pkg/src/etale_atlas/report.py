"""Deterministic text reports: one ``RECORD`` block per datum, then ``SUMMARY``.

Subgroups are printed as element sets in the ambient group's indices.
Cochains on a subgroup ``H`` use the local indices of ``H.as_group``: local
index ``i`` stands for the ``i``-th smallest element of ``H``.
"""

from __future__ import annotations

from .classifiers import (
    CenterSector,
    Classification,
    EtaleDatum1,
    Etale2RepDatum,
    Etale2Skeleton,
    LagrangianDatum1,
    LagrangianDatum2Pointed,
)
from .cohomology import Cochain, CohomologyGroup, cohomology_group
from .formats import format_cocycle
from .groups import FiniteGroup, GroupHom, Subgroup, group_label


def _sub(H: Subgroup) -> str:
    return "{" + ",".join(map(str, H.elements)) + "}" + f" ({group_label(H.as_group)})"


def _factors(fs) -> str:
    return "0" if not fs else " + ".join(f"Z/{f}" for f in fs)


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _cochain(c: Cochain | None, verbose: bool) -> str:
    if c is None:
        return "none"
    vals = list(c.items())
    if not verbose:
        return f"degree {c.degree}, {len(vals)} nonzero values"
    if not vals:
        return "0"
    return " ".join(",".join(map(str, t)) + f"={v.numerator}/{v.denominator}" for t, v in vals)


def _hom(gamma: GroupHom) -> str:
    return "[" + ",".join(str(int(x)) for x in gamma.images) + "]"


def record_fields(rec, verbose: bool = False) -> list[tuple[str, str]]:
    if isinstance(rec, LagrangianDatum1):
        return [
            ("H", _sub(rec.H)),
            ("restriction_class", _vec(rec.restriction_class)),
            ("psi_rep", _cochain(rec.psi_rep, verbose)),
            ("torsor", _factors(rec.torsor)),
            ("choices_up_to_coboundary", str(rec.weight)),
        ]
    if isinstance(rec, EtaleDatum1):
        return [
            ("H", _sub(rec.H)),
            ("N", _sub(rec.N)),
            ("phi_exists", str(rec.phi_exists).lower()),
            ("phi_rep", _cochain(rec.phi_rep, verbose)),
            ("phi_torsor", _factors(rec.phi_torsor)),
            ("quotient_H3", _factors(rec.quotient_h3)),
            ("extension_classes", " ".join(_vec(e) for e in rec.extension_classes) or "none"),
        ]
    if isinstance(rec, LagrangianDatum2Pointed):
        return [
            ("H", _sub(rec.H)),
            ("A", "Vect" if rec.A is None else rec.A.name),
            ("restriction_class", _vec(rec.restriction_class)),
            ("trivialization_rep", _cochain(rec.trivialization_rep, verbose)),
            ("trivialization_torsor", _factors(rec.trivialization_torsor)),
            ("choices_up_to_coboundary", str(rec.weight)),
            ("status", rec.status),
            ("fusion_2_category", rec.label),
        ]
    if isinstance(rec, Etale2RepDatum):
        return [
            ("H", _sub(rec.H)),
            ("A", rec.A.name),
            ("gamma", _hom(rec.gamma)),
            ("category", rec.label),
        ]
    if isinstance(rec, Etale2Skeleton):
        return [
            ("H", _sub(rec.H)),
            ("N", _sub(rec.N)),
            ("A", rec.A.name),
            ("gamma", _hom(rec.gamma)),
            ("pi_layer", rec.pi_layer_note),
            ("trivialization_rep", _cochain(rec.trivialization_rep, verbose)),
            ("trivialization_torsor", _factors(rec.trivialization_torsor)),
        ]
    if isinstance(rec, CenterSector):
        return [
            ("rep", str(rec.rep)),
            ("class_size", str(rec.class_size)),
            ("centralizer", _sub(rec.centralizer)),
            ("twist_class", _vec(rec.twist_class)),
            ("twist_trivial", str(rec.twist_trivial).lower()),
            ("twist_cochain", _cochain(rec.twist_cochain, verbose)),
        ]
    raise TypeError(f"no report layout for {type(rec).__name__}")


def _header(command: str, G: FiniteGroup, extra: list[str] = ()) -> list[str]:
    return [f"command: {command}", f"group: {G.name} order {G.order} ({group_label(G)})", *extra, ""]


def render_classification(cl: Classification, verbose: bool = False, extra: list[str] = ()) -> str:
    out = _header(cl.kind, cl.group, list(extra))
    rejected = {id(r) for r in cl.rejected}
    for i, rec in enumerate(cl.entries, start=1):
        out.append(f"RECORD {i}")
        for k, v in record_fields(rec, verbose):
            out.append(f"{k}: {v}")
        out.append(f"flag: {'REJECTED' if id(rec) in rejected else 'ADMITTED'}")
        out.append("")
    out += ["SUMMARY", f"records={cl.record_count}", f"weighted_count={cl.weighted_count}",
            f"rejected={len(cl.rejected)}"]
    return "\n".join(out) + "\n"


def render_cohomology(H: CohomologyGroup) -> str:
    out = _header("cohomology", H.group, [f"degree: {H.degree}"])
    out.append(f"H^{H.degree} = {H.label()}")
    out.append("")
    for i, (f, g) in enumerate(zip(H.invariant_factors, H.generators), start=1):
        out.append(f"RECORD {i}")
        out.append(f"factor: {f}")
        out.append(format_cocycle(g, f"gen{i}").rstrip("\n"))
        out.append("")
    out += ["SUMMARY", f"records={len(H.invariant_factors)}", f"weighted_count={H.order}", "rejected=0"]
    return "\n".join(out) + "\n"


def render_transgression(res, degree: int) -> str:
    Z = res.centralizer
    out = _header("transgress", Z.parent, [f"degree: {degree}", f"element: {res.element}"])
    out.append("RECORD 1")
    out.append(f"centralizer: {_sub(Z)}")
    out.append(f"class: {_vec(res.klass)}")
    out.append(f"class_group: H^{degree - 1} = {cohomology_group(Z.as_group, degree - 1).label()}")
    out.append(format_cocycle(res.cochain, f"tau{res.element}", Z.as_group.name).rstrip("\n"))
    out.append("")
    out += ["SUMMARY", "records=1", "weighted_count=1", "rejected=0"]
    return "\n".join(out) + "\n"

