"""Dual graphs of connected nodal curves and subcurve combinatorics.

A curve is modelled by its dual graph: one vertex per irreducible component
(labelled with the geometric genus of that component), one edge per node.
Loops and parallel edges are allowed.  A subcurve is a union of components
and is encoded throughout as an ``int`` bitmask of width ``n``: bit ``v``
set means component ``v`` belongs to the subcurve.  Joins, meets and
complements are therefore ``|``, ``&`` and ``full_mask ^ Y``.

Loops are stored explicitly; they count towards genus and internal edges
but never towards connectivity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import DomainMismatch, EmptySubcurve, OverlappingSubcurves

MAX_VERTICES = 16

Edge = tuple[int, int]


def vertices_of(mask: int) -> list[int]:
    """Vertex indices contained in a subcurve mask, ascending."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class DualGraph:
    """Connected dual graph: per-component genera plus a node multiset.

    ``edges`` is kept canonically sorted (each pair ordered, list sorted
    lexicographically), so equal graphs compare and hash equal.
    """

    genera: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        genera = tuple(int(x) for x in self.genera)
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        object.__setattr__(self, "genera", genera)
        object.__setattr__(self, "edges", edges)
        n = len(genera)
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"number of components must be in 1..{MAX_VERTICES}")
        if any(g < 0 for g in genera):
            raise ValueError("genera must be non-negative")
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
        if not self._simple_connected():
            raise ValueError("underlying graph must be connected")

    def _simple_connected(self) -> bool:
        n = len(self.genera)
        adj = [0] * n
        for u, v in self.edges:
            if u != v:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        seen = 1
        frontier = [0]
        while frontier:
            v = frontier.pop()
            new = adj[v] & ~seen
            seen |= new
            frontier.extend(vertices_of(new))
        return seen == (1 << n) - 1

    # -- basic quantities -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.genera)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def multiplicity(self) -> tuple[tuple[int, ...], ...]:
        """Edge multiplicities; loops counted on the diagonal."""
        m = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            m[u][v] += 1
            if u != v:
                m[v][u] += 1
        return tuple(tuple(row) for row in m)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for u, v in self.edges:
            if u != v:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def genus(self) -> int:
        """Arithmetic genus of the whole curve."""
        return self.subcurve_genus(self.full_mask)

    def complement(self, Y: int) -> int:
        return self.full_mask ^ Y

    # -- connectivity -----------------------------------------------------

    def is_connected(self, Y: int) -> bool:
        """Whether the induced multigraph on Y is connected (loops ignored)."""
        if Y == 0:
            raise EmptySubcurve("connectivity of the empty subcurve is undefined")
        adj = self.neighbor_masks
        start = Y & (-Y)
        seen = start
        frontier = [start.bit_length() - 1]
        while frontier:
            v = frontier.pop()
            new = adj[v] & Y & ~seen
            seen |= new
            frontier.extend(vertices_of(new))
        return seen == Y

    def connected_components(self, Y: int) -> list[int]:
        """Partition of Y into maximal connected pieces; empty input gives []."""
        adj = self.neighbor_masks
        out = []
        rest = Y
        while rest:
            start = rest & (-rest)
            seen = start
            frontier = [start.bit_length() - 1]
            while frontier:
                v = frontier.pop()
                new = adj[v] & rest & ~seen
                seen |= new
                frontier.extend(vertices_of(new))
            out.append(seen)
            rest &= ~seen
        return out

    @cached_property
    def connected_subcurves(self) -> tuple[int, ...]:
        """All nonempty connected subcurve masks, ascending."""
        return tuple(Y for Y in range(1, self.full_mask + 1) if self.is_connected(Y))

    @cached_property
    def _connected_set(self) -> frozenset[int]:
        return frozenset(self.connected_subcurves)

    @cached_property
    def biconnected_subcurves(self) -> tuple[int, ...]:
        """Nonempty proper Y with Y and its complement connected, ascending."""
        full = self.full_mask
        con = self._connected_set
        return tuple(Y for Y in range(1, full) if Y in con and (full ^ Y) in con)

    @cached_property
    def bcon_index(self) -> dict[int, int]:
        return {Y: i for i, Y in enumerate(self.biconnected_subcurves)}

    @cached_property
    def bcon_pairs(self) -> tuple[tuple[int, int], ...]:
        """Complementary biconnected pairs (Y, Y^c) with Y < Y^c."""
        full = self.full_mask
        return tuple((Y, full ^ Y) for Y in self.biconnected_subcurves if Y < full ^ Y)

    # -- edge counting ----------------------------------------------------

    def edges_between(self, A: int, B: int) -> int:
        """Number of edges joining disjoint A and B, with multiplicity."""
        if A & B:
            raise OverlappingSubcurves(f"subcurves {A:b} and {B:b} overlap")
        mult = self.multiplicity
        return sum(
            mult[u][v] for u in vertices_of(A) for v in vertices_of(B)
        )

    def internal_edges(self, Y: int) -> tuple[int, ...]:
        """Indices of edges with both endpoints in Y; loops at Y included."""
        return tuple(
            i for i, (u, v) in enumerate(self.edges)
            if (Y >> u) & 1 and (Y >> v) & 1
        )

    def internal_edge_count(self, Y: int) -> int:
        cache = self._internal_count_cache
        c = cache.get(Y)
        if c is None:
            c = len(self.internal_edges(Y))
            cache[Y] = c
        return c

    @cached_property
    def _internal_count_cache(self) -> dict[int, int]:
        return {}

    @cached_property
    def twist_deltas(self) -> tuple[tuple[int, ...], ...]:
        """Per subcurve mask: the chip-firing degree change of a twist."""
        mult = self.multiplicity
        n = self.n
        out = []
        for Y in range(self.full_mask + 1):
            delta = [0] * n
            for v in range(n):
                if (Y >> v) & 1:
                    delta[v] = sum(
                        mult[v][w] for w in range(n)
                        if w != v and not (Y >> w) & 1
                    )
                else:
                    delta[v] = -sum(
                        mult[v][w] for w in range(n)
                        if w != v and (Y >> w) & 1
                    )
            out.append(tuple(delta))
        return tuple(out)

    @cached_property
    def subset_sum_shifts(self) -> tuple[tuple[int, ...], ...]:
        """Per twist subcurve Y and per mask: the change of the degree sum
        over the mask under the twist by Y."""
        out = []
        for Y in range(self.full_mask + 1):
            delta = self.twist_deltas[Y]
            sums = [0] * (self.full_mask + 1)
            for mask in range(1, self.full_mask + 1):
                low = mask & (-mask)
                sums[mask] = sums[mask ^ low] + delta[low.bit_length() - 1]
            out.append(tuple(sums))
        return tuple(out)

    @cached_property
    def line_chi_base(self) -> tuple[int, ...]:
        """Per mask: chi of the degree-0 line bundle on that subcurve
        (component terms minus internal edges); chi of any multidegree is
        this plus the degree sum."""
        base = [0] * (self.full_mask + 1)
        for mask in range(1, self.full_mask + 1):
            base[mask] = sum(
                1 - self.genera[v] for v in vertices_of(mask)
            ) - self.internal_edge_count(mask)
        return tuple(base)

    def subcurve_genus(self, Y: int) -> int:
        """Arithmetic genus of the subcurve Y (0 for the empty subcurve)."""
        if Y == 0:
            return 0
        pieces = self.connected_components(Y)
        return (
            self.internal_edge_count(Y)
            - popcount(Y)
            + len(pieces)
            + sum(self.genera[v] for v in vertices_of(Y))
        )

    # -- spanning tree ----------------------------------------------------

    @cached_property
    def spanning_tree(self) -> "SpanningTree":
        """Deterministic spanning tree: BFS from vertex 0, neighbours in
        ascending index, edge multiplicity collapsed, edges oriented
        parent -> child."""
        parent = {0: None}
        order = [0]
        queue = [0]
        adj = self.neighbor_masks
        while queue:
            v = queue.pop(0)
            for w in vertices_of(adj[v]):
                if w not in parent:
                    parent[w] = v
                    order.append(w)
                    queue.append(w)
        tree_edges = tuple((parent[v], v) for v in order[1:])
        # subtree mask under each child, computed leaf-upward
        sub = {v: 1 << v for v in range(self.n)}
        for v in reversed(order[1:]):
            sub[parent[v]] |= sub[v]
        child_masks = tuple(sub[c] for _, c in tree_edges)
        return SpanningTree(self, tree_edges, child_masks)

    # -- contraction ------------------------------------------------------

    def contract(self, contracted: "tuple[int, ...] | list[int]") -> tuple["DualGraph", "Contraction"]:
        """Contract the given edge indices.

        Quotient vertices are the connected components of (V, contracted);
        each quotient genus is the arithmetic genus of its fiber computed
        with the contracted edges only, and surviving internal edges become
        loops, so the total arithmetic genus is preserved.
        """
        F = sorted(set(contracted))
        for i in F:
            if not 0 <= i < len(self.edges):
                raise ValueError(f"edge index {i} out of range")
        # components of (V, F) via union-find
        root = list(range(self.n))

        def find(a):
            while root[a] != a:
                root[a] = root[root[a]]
                a = root[a]
            return a

        for i in F:
            u, v = self.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                root[max(ru, rv)] = min(ru, rv)
        reps = sorted({find(v) for v in range(self.n)})
        rep_to_new = {r: i for i, r in enumerate(reps)}
        vertex_map = tuple(rep_to_new[find(v)] for v in range(self.n))
        fibers = tuple(
            mask_of(v for v in range(self.n) if vertex_map[v] == t)
            for t in range(len(reps))
        )
        genera = []
        for fib in fibers:
            in_fiber = sum(
                1 for i in F
                if (fib >> self.edges[i][0]) & 1 and (fib >> self.edges[i][1]) & 1
            )
            genera.append(
                in_fiber - popcount(fib) + 1
                + sum(self.genera[v] for v in vertices_of(fib))
            )
        Fset = set(F)
        new_edges = tuple(
            (vertex_map[u], vertex_map[v])
            for i, (u, v) in enumerate(self.edges) if i not in Fset
        )
        target = DualGraph(tuple(genera), new_edges)
        return target, Contraction(self, target, tuple(F), vertex_map, fibers)

    def induced(self, Y: int) -> tuple["DualGraph", list[int]]:
        """Induced subgraph on a nonempty connected subcurve.

        Returns the new graph and the list of original vertex labels, in
        the order they were renamed to 0..k-1.
        """
        if Y == 0:
            raise EmptySubcurve("cannot induce on the empty subcurve")
        verts = vertices_of(Y)
        if not self.is_connected(Y):
            raise ValueError("induced subgraph must be connected")
        renumber = {v: i for i, v in enumerate(verts)}
        genera = tuple(self.genera[v] for v in verts)
        edges = tuple(
            (renumber[u], renumber[v])
            for u, v in self.edges
            if (Y >> u) & 1 and (Y >> v) & 1
        )
        return DualGraph(genera, edges), verts

    # -- symmetries ---------------------------------------------------------

    @cached_property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        """All vertex permutations preserving genera and the edge multiset.

        Brute force over permutations; fine at n <= 7.
        """
        out = []
        canonical = self.edges
        for perm in itertools.permutations(range(self.n)):
            if any(self.genera[v] != self.genera[perm[v]] for v in range(self.n)):
                continue
            mapped = tuple(sorted(
                (min(perm[u], perm[v]), max(perm[u], perm[v]))
                for u, v in self.edges
            ))
            if mapped == canonical:
                out.append(perm)
        return tuple(out)


def permute_mask(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    for v in vertices_of(mask):
        out |= 1 << perm[v]
    return out


@dataclass(frozen=True)
class SpanningTree:
    """Canonical spanning tree with parent -> child orientation.

    ``child_masks[i]`` is the subtree under the child of ``edges[i]``; the
    parent side (the side containing vertex 0) is its complement.
    """

    graph: DualGraph
    edges: tuple[tuple[int, int], ...]
    child_masks: tuple[int, ...]

    def valence(self, Y: int) -> int:
        """Number of tree edges joining Y and its complement."""
        return sum(
            1 for p, c in self.edges
            if ((Y >> p) & 1) != ((Y >> c) & 1)
        )

    def cut_pairs(self) -> tuple[tuple[int, int], ...]:
        """(parent_side, child_side) per tree edge."""
        full = self.graph.full_mask
        return tuple((full ^ m, m) for m in self.child_masks)

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        kids: dict[int, list[int]] = {v: [] for v in range(self.graph.n)}
        for p, c in self.edges:
            kids[p].append(c)
        return {v: tuple(ws) for v, ws in kids.items()}


@dataclass(frozen=True)
class Contraction:
    """Edge contraction of a dual graph, modelling an etale specialization.

    The source carries the special (finer) curve, the target the generic
    (contracted) one.  ``vertex_map`` sends source vertices to quotient
    vertices; its fibers are the connected components of (V, contracted).
    """

    source: DualGraph
    target: DualGraph
    contracted_edges: tuple[int, ...]
    vertex_map: tuple[int, ...]
    fibers: tuple[int, ...]

    def pushforward(self, Y: int) -> int:
        """Degeneration of a subcurve of the target: the union of fibers.

        Preserves joins, meets and the number of connected components, and
        sends (bi)connected subcurves to (bi)connected subcurves.
        """
        if Y & ~self.target.full_mask:
            raise DomainMismatch("subcurve is not a mask over the target graph")
        out = 0
        for t in vertices_of(Y):
            out |= self.fibers[t]
        return out
