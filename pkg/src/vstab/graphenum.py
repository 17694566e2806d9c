"""Enumeration of small connected multigraphs up to isomorphism.

Used by the evidence scanner and by the exhaustive test sweeps.  All
genera default to zero; tests add genus labels where they matter.
"""

from __future__ import annotations

import itertools

from .graphs import DualGraph


def canonical_edge_form(n: int, edges) -> tuple:
    """Lexicographically minimal relabelling of an edge multiset."""
    best = None
    for perm in itertools.permutations(range(n)):
        image = tuple(sorted(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges
        ))
        if best is None or image < best:
            best = image
    return best


def _is_connected(n: int, edges) -> bool:
    if n == 1:
        return True
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def connected_multigraphs(
    max_vertices: int,
    max_edges: int,
    *,
    include_loops: bool = False,
) -> list[DualGraph]:
    """All connected multigraphs with at most the given vertices and edges,
    one representative per isomorphism class, genera all zero.

    Loops are skipped by default: they are invisible to the subcurve
    combinatorics (connectivity, biconnectedness, stability) and only
    shift genus bookkeeping.
    """
    out = []
    for n in range(1, max_vertices + 1):
        slots = [(i, j) for i in range(n) for j in range(i + (0 if include_loops else 1), n)]
        seen = set()
        for m in range(n - 1, max_edges + 1):
            for combo in itertools.combinations_with_replacement(slots, m):
                if not _is_connected(n, combo):
                    continue
                key = canonical_edge_form(n, combo)
                if key in seen:
                    continue
                seen.add(key)
                out.append(DualGraph((0,) * n, key))
    return out
