"""Command-line front end.

Exit codes: 0 for success (and positive verdicts), 1 for a negative
domain verdict (invalid stability, non-classical, ...), 2 for malformed
input.  Output is canonical JSON by default; posets can also be emitted
as DOT or a plain table.  Identical inputs, configuration and seed give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import graphenum, limits, polarization, posets, serialize, sheaves
from .errors import VstabError
from .graphs import DualGraph, mask_of, vertices_of
from .serialize import SchemaError
from .stability import VStability

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    max_vertices: int = 4
    degree_window: int = 3
    denominator_bound: int = 60
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if min(self.max_vertices, self.degree_window, self.denominator_bound) <= 0:
            raise ValueError("all bounds must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            max_vertices=getattr(args, "max_vertices", 4),
            degree_window=getattr(args, "window", None) or 3,
            denominator_bound=60,
            output_format=getattr(args, "format", "json"),
            seed=getattr(args, "seed", 0),
        )


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _graph(args) -> DualGraph:
    return serialize.graph_from_json(_load_json(args.graph))


def _stability(args, g: DualGraph) -> VStability:
    return serialize.stability_from_json(g, _load_json(args.stability))


def _emit(args, doc):
    sys.stdout.write(serialize.dumps(doc))


def _parse_subcurve_list(text: str) -> list[int]:
    """Parts like "0,2|1" -> vertex masks."""
    parts = []
    for chunk in text.split("|"):
        verts = [int(tok) for tok in chunk.split(",") if tok.strip() != ""]
        parts.append(mask_of(verts))
    return parts


# -- commands ---------------------------------------------------------------------


def cmd_validate(args) -> int:
    g = _graph(args)
    s = _stability(args, g)
    report = s.validate()
    doc = {
        "ok": report.ok,
        "violations": [
            {
                "kind": v.kind,
                "subcurves": [vertices_of(Y) for Y in v.subcurves],
                "detail": v.detail,
            }
            for v in report.violations
        ],
    }
    _emit(args, doc)
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_enum_orbits(args) -> int:
    g = _graph(args)
    reps = posets.enumerate_orbits(g)
    if args.chi:
        shift = (args.chi,) + (0,) * (g.n - 1)
        reps = [posets.translate(s, shift) for s in reps]
    _emit(args, {"orbits": [serialize.stability_to_json(s) for s in reps]})
    return EXIT_OK


def cmd_enum_deg(args) -> int:
    g = _graph(args)
    degs = posets.enumerate_degeneracy_subsets(g)
    if args.mod_symmetry:
        reps, _ = posets.deg_symmetry_classes(g, degs)
        degs = reps
    doc = {
        "degeneracy_subsets": [
            {
                "members": sorted(vertices_of(Y) for Y in d.members),
                "minimal": sorted(
                    vertices_of(Y) for Y in posets.minimal_elements(d)
                ),
            }
            for d in degs
        ],
        "mod_symmetry": bool(args.mod_symmetry),
    }
    _emit(args, doc)
    return EXIT_OK


def _deg_label(d) -> str:
    mins = posets.minimal_elements(d)
    if not mins:
        return "{}"
    return "{" + ", ".join(
        "{" + ",".join(map(str, vertices_of(Y))) + "}" for Y in sorted(mins)
    ) + "}"


def cmd_poset(args) -> int:
    g = _graph(args)
    if args.kind == "deg":
        degs = posets.enumerate_degeneracy_subsets(g)
        if args.mod_symmetry:
            reps, assignment = posets.deg_symmetry_classes(g, degs)
            # class order: some member of one class dominates the representative
            keyed = {id(r): k for k, r in enumerate(reps)}
            members: list[list] = [[] for _ in reps]
            for d, k in zip(degs, assignment):
                members[k].append(d)

            def class_leq(a, b):
                # a <= b when some member of b's class dominates a
                ka, kb = keyed[id(a)], keyed[id(b)]
                if ka == kb:
                    return True
                return any(posets.deg_leq(m, a) for m in members[kb])

            diagram = posets.hasse(reps, class_leq, label=_deg_label)
        else:
            diagram = posets.hasse(
                degs,
                lambda a, b: a.members == b.members or posets.deg_leq(b, a),
                label=_deg_label,
            )
    else:
        stabs = posets.enumerate_window_stabilities(g)
        if args.chi:
            shift = (args.chi,) + (0,) * (g.n - 1)
            stabs = [posets.translate(s, shift) for s in stabs]
        diagram = posets.hasse(
            stabs,
            lambda a, b: posets.vstab_leq(b, a),
            label=lambda s: str(list(s.values)),
        )
    if args.format == "dot":
        sys.stdout.write(serialize.hasse_to_dot(diagram))
    elif args.format == "table":
        for lo, hi in diagram.covers:
            sys.stdout.write(f"{diagram.labels[lo]} < {diagram.labels[hi]}\n")
    else:
        _emit(args, serialize.hasse_to_json(diagram))
    return EXIT_OK


def cmd_classical(args) -> int:
    g = _graph(args)
    s = _stability(args, g)
    if not s.is_valid:
        _emit(args, {"classical": None, "error": "stability is not valid"})
        return EXIT_INPUT
    witness = polarization.is_classical(s)
    if witness is None:
        _emit(args, {"classical": False})
        return EXIT_DOMAIN
    _emit(args, {
        "classical": True,
        "witness": serialize.polarization_to_json(witness),
    })
    return EXIT_OK


def cmd_semistable(args) -> int:
    g = _graph(args)
    s = _stability(args, g)
    if not s.is_valid:
        _emit(args, {"error": "stability is not valid"})
        return EXIT_INPUT
    cfg = RunConfig.from_args(args)
    classes = sheaves.enumerate_semistable(
        g, s,
        full_support_only=not args.all_supports,
        degree_window=cfg.degree_window if args.window is not None else None,
    )
    _emit(args, {"semistable": [serialize.sheaf_to_json(I) for I in classes]})
    return EXIT_OK


def cmd_limit(args) -> int:
    g = _graph(args)
    s = _stability(args, g)
    if not s.is_valid:
        _emit(args, {"error": "stability is not valid"})
        return EXIT_INPUT
    d0 = tuple(int(tok) for tok in args.multidegree.split(","))
    if len(d0) != g.n:
        raise SchemaError("multidegree length must match the component count")
    result, trace = limits.esteves_limit(d0, s)
    _emit(args, serialize.trace_to_json(trace))
    return EXIT_OK


def cmd_specialize(args) -> int:
    g = _graph(args)
    I = serialize.sheaf_from_json(g, _load_json(args.sheaf))
    parts = _parse_subcurve_list(args.partition)
    J = sheaves.gr_specialize(I, sheaves.OrderedPartition(tuple(parts)))
    _emit(args, serialize.sheaf_to_json(J))
    return EXIT_OK


def cmd_normal_form(args) -> int:
    g = _graph(args)
    s = _stability(args, g)
    if not s.is_valid:
        _emit(args, {"error": "stability is not valid"})
        return EXIT_INPUT
    nf, tau = posets.normal_form(s)
    _emit(args, {
        "normal_form": serialize.stability_to_json(nf),
        "tau": list(tau),
    })
    return EXIT_OK


def cmd_qdeg_scan(args) -> int:
    cfg = RunConfig.from_args(args)
    for g in graphenum.connected_multigraphs(cfg.max_vertices, args.max_edges):
        report = posets.qdeg_scan(g)
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vstab",
        description="Stability conditions and degenerations on dual graphs of nodal curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, stability=False):
        p.add_argument("--graph", required=True, help="graph JSON file")
        if stability:
            p.add_argument("--stability", required=True, help="stability JSON file")
        p.add_argument("--chi", type=int, default=0,
                       help="characteristic for enumerations (orbit "
                            "representatives are translated to it)")
        p.add_argument("--format", default="json", choices=["json", "dot", "table"])
        p.add_argument("--max-vertices", type=int, default=4)
        p.add_argument("--window", type=int, default=None)
        p.add_argument("--mod-symmetry", action="store_true")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = common(sub.add_parser("validate"), stability=True)
    p.set_defaults(func=cmd_validate)

    p = common(sub.add_parser("enum-orbits"))
    p.set_defaults(func=cmd_enum_orbits)

    p = common(sub.add_parser("enum-deg"))
    p.set_defaults(func=cmd_enum_deg)

    p = common(sub.add_parser("poset"))
    p.add_argument("--kind", default="deg", choices=["deg", "vstab"])
    p.set_defaults(func=cmd_poset)

    p = common(sub.add_parser("classical"), stability=True)
    p.set_defaults(func=cmd_classical)

    p = common(sub.add_parser("semistable"), stability=True)
    p.add_argument("--all-supports", action="store_true")
    p.set_defaults(func=cmd_semistable)

    p = common(sub.add_parser("limit"), stability=True)
    p.add_argument("--multidegree", required=True, help="comma-separated degrees")
    p.set_defaults(func=cmd_limit)

    p = common(sub.add_parser("specialize"))
    p.add_argument("--sheaf", required=True, help="sheaf JSON file")
    p.add_argument("--partition", required=True, help='parts as "0,2|1"')
    p.set_defaults(func=cmd_specialize)

    p = common(sub.add_parser("normal-form"), stability=True)
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("qdeg-scan")
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--max-edges", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_qdeg_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except VstabError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
