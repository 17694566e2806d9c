"""JSON (and DOT) schemas for every value crossing the CLI boundary.

Graph:         {"genera": [g0, ...], "edges": [[u, v], ...]}
Stability:     {"chi": c, "values": [{"subcurve": [v, ...], "s": k}, ...]}
Polarization:  {"chi": c, "psi": [["num", "den"], ...]}
Sheaf:         {"support": [v, ...], "multidegree": {"v": d, ...},
                "nonfree": [edge_index, ...]}
Trace:         {"steps": [{"Y": [...], "beta_min": m, "d": [...]}, ...],
                "result": [...]}
Hasse:         {"elements": [...], "covers": [[lower, upper], ...]}

Vertices are 0-based, loops appear as [v, v], edge indices point into the
canonical sorted edge list, and subcurves are sorted vertex lists.  All
emitters sort their output, so serialization is canonical.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import DomainMismatch
from .graphs import DualGraph, mask_of, vertices_of
from .limits import LimitTrace
from .polarization import NumericalPolarization
from .posets import HasseDiagram
from .sheaves import SheafData
from .stability import DegeneracySet, VStability


class SchemaError(ValueError):
    """Malformed input document."""


def _need(doc: dict, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"missing key {key!r}")
    return doc[key]


# -- graphs ------------------------------------------------------------------


def graph_to_json(g: DualGraph) -> dict:
    return {"genera": list(g.genera), "edges": [list(e) for e in g.edges]}


def graph_from_json(doc: dict) -> DualGraph:
    genera = _need(doc, "genera")
    edges = _need(doc, "edges")
    try:
        return DualGraph(tuple(genera), tuple((int(u), int(v)) for u, v in edges))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad graph document: {exc}") from exc


# -- stabilities ----------------------------------------------------------------


def stability_to_json(s: VStability) -> dict:
    return {
        "chi": s.chi,
        "values": [
            {"subcurve": vertices_of(Y), "s": v}
            for Y, v in zip(s.graph.biconnected_subcurves, s.values)
        ],
    }


def stability_from_json(g: DualGraph, doc: dict) -> VStability:
    chi = _need(doc, "chi")
    entries = _need(doc, "values")
    mapping = {}
    try:
        for entry in entries:
            Y = mask_of(int(v) for v in _need(entry, "subcurve"))
            mapping[Y] = int(_need(entry, "s"))
        return VStability.from_dict(g, int(chi), mapping)
    except DomainMismatch as exc:
        raise SchemaError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad stability document: {exc}") from exc


def degeneracy_to_json(d: DegeneracySet) -> dict:
    return {"members": sorted(vertices_of(Y) for Y in d.members)}


# -- polarizations ----------------------------------------------------------------


def polarization_to_json(p: NumericalPolarization) -> dict:
    return {
        "chi": p.chi,
        "psi": [[str(x.numerator), str(x.denominator)] for x in p.psi],
    }


def polarization_from_json(g: DualGraph, doc: dict) -> NumericalPolarization:
    chi = _need(doc, "chi")
    raw = _need(doc, "psi")
    try:
        psi = tuple(Fraction(int(num), int(den)) for num, den in raw)
        return NumericalPolarization(g, int(chi), psi)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad polarization document: {exc}") from exc


# -- sheaves ---------------------------------------------------------------------


def sheaf_to_json(I: SheafData) -> dict:
    return {
        "support": vertices_of(I.support),
        "multidegree": {
            str(v): I.multidegree[v] for v in vertices_of(I.support)
        },
        "nonfree": sorted(I.nonfree),
    }


def sheaf_from_json(g: DualGraph, doc: dict) -> SheafData:
    support = _need(doc, "support")
    degs = _need(doc, "multidegree")
    nonfree = _need(doc, "nonfree")
    try:
        mask = mask_of(int(v) for v in support)
        d = [0] * g.n
        for key, val in degs.items():
            d[int(key)] = int(val)
        return SheafData(g, mask, tuple(d), frozenset(int(e) for e in nonfree))
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"bad sheaf document: {exc}") from exc


# -- traces and diagrams ------------------------------------------------------------


def trace_to_json(trace: LimitTrace) -> dict:
    return {
        "start": list(trace.start),
        "steps": [
            {
                "Y": vertices_of(step.subcurve),
                "beta_min": step.beta_min,
                "d": list(step.multidegree),
            }
            for step in trace.steps
        ],
        "result": list(trace.result),
    }


def hasse_to_json(h: HasseDiagram) -> dict:
    return {
        "elements": list(h.labels),
        "covers": [list(c) for c in h.covers],
    }


def hasse_to_dot(h: HasseDiagram, name: str = "poset") -> str:
    lines = [f"digraph {name} {{"]
    for i, label in enumerate(h.labels):
        lines.append(f'  n{i} [label="{label}"];')
    for lo, hi in h.covers:
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(doc) -> str:
    """Canonical JSON emission: sorted keys, newline-terminated."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
