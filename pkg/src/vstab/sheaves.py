"""Combinatorial rank-1 torsion-free sheaves on a nodal curve.

A sheaf class is the triple (support, multidegree, non-free node set):
the support subcurve, one integer per supported component, and the set of
internal nodes of the support at which the sheaf fails to be locally
free.  This is the coarsest data determining every quantity in scope;
continuous gluing moduli within a class are deliberately collapsed.

The Euler characteristic formula is the partial-normalization dictionary:
separating the non-free nodes leaves a line bundle of the given
multidegree on the partial normalization, so

    chi(I) = sum over supported v of (d_v + 1 - genus_v)
             - #(internal edges of the support that are free).

It is pinned by two identities checked in the test suite: the structure
sheaf has chi = 1 - g, and chi is additive across the restriction/subsheaf
exact sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from .errors import (
    EmptySubcurve,
    DomainMismatch,
    InvalidPartition,
    NotPolystable,
    NotSemistable,
    OverlappingSubcurves,
)
from .graphs import DualGraph, vertices_of
from .stability import VStability


@dataclass(frozen=True)
class SheafData:
    graph: DualGraph
    support: int
    multidegree: tuple[int, ...]     # full length n; zero outside the support
    nonfree: frozenset[int]          # edge indices, internal to the support

    def __post_init__(self):
        g = self.graph
        if self.support == 0:
            raise EmptySubcurve("a sheaf needs a nonempty support")
        if self.support & ~g.full_mask:
            raise DomainMismatch("support is not a subcurve mask")
        d = tuple(int(x) for x in self.multidegree)
        if len(d) != g.n:
            raise DomainMismatch("one degree entry per component required")
        if any(d[v] != 0 for v in range(g.n) if not (self.support >> v) & 1):
            raise ValueError("degrees outside the support must be zero")
        object.__setattr__(self, "multidegree", d)
        object.__setattr__(self, "nonfree", frozenset(int(e) for e in self.nonfree))
        internal = set(g.internal_edges(self.support))
        if not self.nonfree <= internal:
            raise ValueError("non-free nodes must be internal to the support")

    @classmethod
    def line_bundle(cls, graph: DualGraph, multidegree) -> "SheafData":
        return cls(graph, graph.full_mask, tuple(multidegree), frozenset())

    # -- Euler characteristics ------------------------------------------------

    def euler_char(self) -> int:
        g = self.graph
        free_internal = g.internal_edge_count(self.support) - len(self.nonfree)
        return sum(
            self.multidegree[v] + 1 - g.genera[v]
            for v in vertices_of(self.support)
        ) - free_internal

    def euler_char_on(self, Y: int) -> int:
        """chi of the torsion-free restriction to Y (met with the support)."""
        return self.restrict(Y).euler_char()

    # -- the two restrictions ----------------------------------------------------

    def restrict(self, Y: int) -> "SheafData":
        """Torsion-free quotient supported on Y meet support; multidegree is
        kept, non-free nodes are intersected."""
        g = self.graph
        supp = Y & self.support
        if supp == 0:
            raise EmptySubcurve("restriction along a subcurve missing the support")
        internal = set(g.internal_edges(supp))
        d = tuple(
            self.multidegree[v] if (supp >> v) & 1 else 0 for v in range(g.n)
        )
        return SheafData(g, supp, d, self.nonfree & internal)

    def sub_part(self, Y: int) -> "SheafData":
        """Largest subsheaf supported on Y: the restriction twisted down by
        the free nodes joining Y to the rest of the support."""
        g = self.graph
        restricted = self.restrict(Y)
        inner = restricted.support
        outer = self.support & ~inner
        d = list(restricted.multidegree)
        for e in g.internal_edges(self.support):
            if e in self.nonfree:
                continue
            u, v = g.edges[e]
            if (inner >> u) & 1 and (outer >> v) & 1:
                d[u] -= 1
            elif (inner >> v) & 1 and (outer >> u) & 1:
                d[v] -= 1
        return SheafData(g, inner, tuple(d), restricted.nonfree)

    # -- splitting structure -------------------------------------------------------

    def splits_at(self, Y: int) -> bool:
        """Whether the sheaf is a direct sum along Y: every node joining Y
        to the complementary part of the support is non-free."""
        g = self.graph
        inner = Y & self.support
        outer = self.support & ~inner
        for e in g.internal_edges(self.support):
            u, v = g.edges[e]
            crosses = (
                ((inner >> u) & 1 and (outer >> v) & 1)
                or ((inner >> v) & 1 and (outer >> u) & 1)
            )
            if crosses and e not in self.nonfree:
                return False
        return True

    @cached_property
    def canonical_pieces(self) -> tuple["SheafData", ...]:
        """Indecomposable summands: restrictions to the connected components
        of the support with the non-free nodes removed."""
        g = self.graph
        free_adj = [0] * g.n
        for e in g.internal_edges(self.support):
            if e in self.nonfree:
                continue
            u, v = g.edges[e]
            if u != v:
                free_adj[u] |= 1 << v
                free_adj[v] |= 1 << u
        pieces = []
        rest = self.support
        while rest:
            start = rest & (-rest)
            seen = start
            frontier = [start.bit_length() - 1]
            while frontier:
                w = frontier.pop()
                new = free_adj[w] & rest & ~seen
                seen |= new
                frontier.extend(vertices_of(new))
            pieces.append(seen)
            rest &= ~seen
        return tuple(self.restrict(p) for p in pieces)

    def canonical_decomposition(self) -> list["SheafData"]:
        return list(self.canonical_pieces)

    def aut_rank(self) -> int:
        """Rank of the automorphism torus: the number of indecomposable
        summands."""
        return len(self.canonical_pieces)

    def is_simple(self) -> bool:
        return self.aut_rank() == 1


@dataclass(frozen=True)
class OrderedPartition:
    """Ordered list of pairwise-disjoint subcurves covering a support."""

    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if any(p == 0 for p in self.parts):
            raise InvalidPartition("parts must be nonempty")
        for i, a in enumerate(self.parts):
            for b in self.parts[i + 1:]:
                if a & b:
                    raise InvalidPartition("parts must be pairwise disjoint")

    @property
    def union(self) -> int:
        out = 0
        for p in self.parts:
            out |= p
        return out


# -- semistability -----------------------------------------------------------------


def _component_data(I: SheafData, s: VStability):
    if I.graph != s.graph:
        raise DomainMismatch("sheaf and stability live on different graphs")
    return I.graph.connected_components(I.support)


def _bcon_within(g: DualGraph, Y: int) -> list[int]:
    """Biconnected subcurves of Y viewed as a curve in its own right."""
    cache = getattr(g, "_bcon_within_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(g, "_bcon_within_cache", cache)
    got = cache.get(Y)
    if got is not None:
        return got
    out = []
    sub = Y
    Z = (sub - 1) & sub
    while Z:
        if g.is_connected(Z) and g.is_connected(Y ^ Z):
            out.append(Z)
        Z = (Z - 1) & sub
    out.reverse()
    cache[Y] = out
    return out


def is_semistable(I: SheafData, s: VStability) -> bool:
    """Every connected component of the support is in the extended
    degeneracy set, carries the extended value as its chi, and dominates
    the restricted stability on biconnected pieces."""
    s._require_valid()
    dhat = s.extended_degeneracy
    for Yi in _component_data(I, s):
        if Yi not in dhat:
            return False
        if I.euler_char_on(Yi) != s.extended_value(Yi):
            return False
        for Z in _bcon_within(I.graph, Yi):
            if I.euler_char_on(Z) < s.extended_value(Z):
                return False
    return True


def is_polystable(I: SheafData, s: VStability) -> bool:
    """Semistable, with every tight degenerate piece split off."""
    if not is_semistable(I, s):
        return False
    dhat = s.extended_degeneracy
    for Yi in _component_data(I, s):
        for Z in _bcon_within(I.graph, Yi):
            if Z not in dhat:
                continue
            if I.euler_char_on(Z) == s.extended_value(Z) and not _splits_within(I, Yi, Z):
                return False
    return True


def is_stable(I: SheafData, s: VStability) -> bool:
    """Semistable with strict inequality at every degenerate piece.

    A sheaf with disconnected support is a direct sum, hence never simple
    and never stable; the per-component inequalities are only tested on a
    connected support.
    """
    comps = _component_data(I, s)
    if len(comps) != 1 or not is_semistable(I, s):
        return False
    dhat = s.extended_degeneracy
    for Yi in comps:
        for Z in _bcon_within(I.graph, Yi):
            if Z in dhat and I.euler_char_on(Z) == s.extended_value(Z):
                return False
    return True


def relative_extended_value(s: VStability, Y: int, W: int) -> int:
    """Extended V-function of the restriction of s to Y, evaluated at
    W <= Y, computed in ambient terms: the pieces of Y minus W are
    biconnected in Y, where the restricted stability agrees with the
    ambient extended function."""
    g = s.graph
    if W == Y:
        return s.extended_value(Y)
    pieces = g.connected_components(W)
    if len(pieces) > 1:
        return sum(relative_extended_value(s, Y, P) for P in pieces)
    dhat = s.extended_degeneracy
    total = s.extended_value(Y)
    for V in g.connected_components(Y & ~W):
        total -= s.extended_value(V)
        if V not in dhat:
            total += 1
    return total


def in_relative_dhat(s: VStability, Y: int, W: int) -> bool:
    """Membership of W in the extended degeneracy set of the restriction
    of s to Y: every piece of Y minus W lies in the ambient extended
    degeneracy set.  (Only an inclusion into the ambient set holds in
    general; the pieces of the complement within Y can be nondegenerate
    even when W is ambiently degenerate.)"""
    dhat = s.extended_degeneracy
    return all(V in dhat for V in s.graph.connected_components(Y & ~W))


def is_polystable_via_extended(I: SheafData, s: VStability) -> bool:
    """Characterization through the extended degeneracy set of the
    restricted stability: must agree with :func:`is_polystable`."""
    if not is_semistable(I, s):
        return False
    g = I.graph
    for Yi in _component_data(I, s):
        for Z in _connected_within(g, Yi):
            if Z == Yi or not in_relative_dhat(s, Yi, Z):
                continue
            tight = I.euler_char_on(Z) == relative_extended_value(s, Yi, Z)
            if tight and not _splits_within(I, Yi, Z):
                return False
    return True


def is_stable_via_extended(I: SheafData, s: VStability) -> bool:
    """Characterization through the extended degeneracy set of the
    restricted stability: must agree with :func:`is_stable`."""
    comps = _component_data(I, s)
    if len(comps) != 1 or not is_semistable(I, s):
        return False
    g = I.graph
    for Yi in comps:
        for Z in _connected_within(g, Yi):
            if Z == Yi or not in_relative_dhat(s, Yi, Z):
                continue
            if I.euler_char_on(Z) == relative_extended_value(s, Yi, Z):
                return False
    return True


def _connected_within(g: DualGraph, Y: int) -> list[int]:
    """Nonempty connected subcurves of Y, as subcurves of the ambient graph
    (the restricted stability's extended degeneracy set is the ambient one
    met with these)."""
    out = []
    Z = Y
    while Z:
        if g.is_connected(Z):
            out.append(Z)
        Z = (Z - 1) & Y
    return out


def _splits_within(I: SheafData, Yi: int, Z: int) -> bool:
    """Split test for the piece supported on Yi along Z."""
    return I.restrict(Yi).splits_at(Z)


# -- isotrivial specialization --------------------------------------------------------


def gr_specialize(I: SheafData, P: OrderedPartition) -> SheafData:
    """Associated graded of the filtration attached to an ordered partition
    of the support: the direct sum of (sub_part at the tail union)
    restricted to each part.  Chi is preserved; the trivial partition
    returns the sheaf unchanged."""
    if P.union != I.support:
        raise InvalidPartition("parts must partition the support")
    g = I.graph
    parts = P.parts
    d = [0] * g.n
    nonfree = set()
    total = 0
    for i, Y in enumerate(parts):
        tail = 0
        for W in parts[i:]:
            tail |= W
        piece = I.sub_part(tail).restrict(Y)
        total += piece.euler_char()
        for v in vertices_of(piece.support):
            d[v] = piece.multidegree[v]
        nonfree |= piece.nonfree
    for e in g.internal_edges(I.support):
        u, v = g.edges[e]
        pu = next((i for i, Y in enumerate(parts) if (Y >> u) & 1), None)
        pv = next((i for i, Y in enumerate(parts) if (Y >> v) & 1), None)
        if pu != pv:
            nonfree.add(e)
    out = SheafData(g, I.support, tuple(d), frozenset(nonfree))
    if out.euler_char() != I.euler_char() or total != I.euler_char():
        raise AssertionError("graded pieces do not preserve chi")
    return out


def polystable_limit(I: SheafData, s: VStability) -> SheafData:
    """The unique polystable isotrivial specialization of a semistable
    sheaf: repeatedly split off a tight degenerate piece until polystable.
    Polystable inputs are fixed points; the result is independent of the
    witness order (Jordan-Holder), which the test suite verifies by
    branching over witnesses."""
    if not is_semistable(I, s):
        raise NotSemistable("the limit is defined for semistable sheaves")
    current = I
    while True:
        Z = _tight_unsplit_witness(current, s)
        if Z is None:
            return current
        rest = current.support & ~Z
        current = gr_specialize(current, OrderedPartition((Z, rest)))


def _tight_unsplit_witness(I: SheafData, s: VStability) -> Optional[int]:
    dhat = s.extended_degeneracy
    for Yi in _component_data(I, s):
        for Z in _bcon_within(I.graph, Yi):
            if Z not in dhat:
                continue
            if I.euler_char_on(Z) == s.extended_value(Z) and not _splits_within(I, Yi, Z):
                return Z
    return None


def tight_unsplit_witnesses(I: SheafData, s: VStability) -> list[int]:
    """All reduction witnesses available at this point; exposed so tests
    can branch over every reduction order."""
    dhat = s.extended_degeneracy
    out = []
    for Yi in _component_data(I, s):
        for Z in _bcon_within(I.graph, Yi):
            if Z not in dhat:
                continue
            if I.euler_char_on(Z) == s.extended_value(Z) and not _splits_within(I, Yi, Z):
                out.append(Z)
    return out


def stable_summands(I: SheafData, s: VStability) -> list[SheafData]:
    """Indecomposable summands of a polystable sheaf, each verified
    stable."""
    if not is_polystable(I, s):
        raise NotPolystable("stable summands exist for polystable sheaves")
    pieces = I.canonical_decomposition()
    for piece in pieces:
        if not is_stable(piece, s):
            raise AssertionError("summand of a polystable sheaf is not stable")
    return pieces


# -- gluing -------------------------------------------------------------------------


def extension_glue(
    J: SheafData,
    I: SheafData,
    free_boundary: frozenset[int],
    s: Optional[VStability] = None,
) -> SheafData:
    """Extension of J by I (quotient J, subsheaf I) with a prescribed
    free/non-free pattern on the boundary nodes.

    The result K restricts to J and has I as the subsheaf on the support
    of I, so the I-side degrees are raised by the chosen free boundary
    nodes.  With ``s`` supplied (and both inputs semistable with supports
    decomposing into extended-degenerate pieces), semistability of the
    result is asserted.
    """
    g = J.graph
    if g != I.graph:
        raise DomainMismatch("summands live on different graphs")
    if J.support & I.support:
        raise OverlappingSubcurves("supports must be disjoint")
    support = J.support | I.support
    boundary = set()
    for e in g.internal_edges(support):
        u, v = g.edges[e]
        if ((J.support >> u) & 1 and (I.support >> v) & 1) or (
            (J.support >> v) & 1 and (I.support >> u) & 1
        ):
            boundary.add(e)
    free_boundary = frozenset(int(e) for e in free_boundary)
    if not free_boundary <= boundary:
        raise ValueError("free boundary choice must consist of boundary nodes")
    d = [0] * g.n
    for v in vertices_of(J.support):
        d[v] = J.multidegree[v]
    for v in vertices_of(I.support):
        d[v] = I.multidegree[v]
    for e in free_boundary:
        u, v = g.edges[e]
        d[u if (I.support >> u) & 1 else v] += 1
    nonfree = J.nonfree | I.nonfree | (boundary - free_boundary)
    K = SheafData(g, support, tuple(d), frozenset(nonfree))
    if s is not None and is_semistable(J, s) and is_semistable(I, s):
        comps = g.connected_components(support)
        if all(c in s.extended_degeneracy for c in comps) and not is_semistable(K, s):
            raise AssertionError("extension of semistables failed to be semistable")
    return K


# -- enumeration -------------------------------------------------------------------


def enumerate_semistable(
    g: DualGraph,
    s: VStability,
    *,
    full_support_only: bool = False,
    degree_window: Optional[int] = None,
) -> list[SheafData]:
    """All semistable sheaf classes of characteristic |s|.

    Degrees are confined, per supported component, to the window forced by
    the semistability inequalities (chi on the component between the
    extended value and the extended value plus the boundary valence),
    unless ``degree_window`` overrides it with a symmetric box.
    """
    s._require_valid()
    dhat = s.extended_degeneracy
    out = []
    supports = [g.full_mask] if full_support_only else range(1, g.full_mask + 1)
    for supp in supports:
        comps = g.connected_components(supp)
        if not all(c in dhat for c in comps):
            continue
        internal = g.internal_edges(supp)
        verts = vertices_of(supp)
        for nonfree in _subsets(internal):
            target = (
                s.chi if supp == g.full_mask else
                sum(s.extended_value(c) for c in comps)
            )
            degsum = target - sum(1 - g.genera[v] for v in verts) + (
                len(internal) - len(nonfree)
            )
            windows = []
            for v in verts:
                if degree_window is not None:
                    windows.append((-degree_window, degree_window))
                else:
                    windows.append(_degree_window_for(g, s, supp, v))
            for d in _bounded_sums(windows, degsum):
                full_d = [0] * g.n
                for v, dv in zip(verts, d):
                    full_d[v] = dv
                I = SheafData(g, supp, tuple(full_d), frozenset(nonfree))
                if I.euler_char() == target and is_semistable(I, s):
                    out.append(I)
    return out


def _degree_window_for(g: DualGraph, s: VStability, supp: int, v: int) -> tuple[int, int]:
    """Window on d_v forced by semistability within the support component
    of v: chi on v is at least the restricted extended value, and at most
    the subsheaf bound plus the boundary valence; loops widen the
    translation to degrees by their count."""
    comp = next(c for c in g.connected_components(supp) if (c >> v) & 1)
    vmask = 1 << v
    rest = comp & ~vmask
    lo_chi = relative_extended_value(s, comp, vmask)
    if rest:
        hi_chi = (
            s.extended_value(comp)
            - relative_extended_value(s, comp, rest)
            + g.edges_between(vmask, rest)
        )
    else:
        hi_chi = lo_chi
    loops = sum(1 for (a, b) in g.edges if a == b == v)
    return lo_chi + g.genera[v] - 1, hi_chi + g.genera[v] - 1 + loops


def _subsets(items) -> Iterator[frozenset]:
    items = list(items)
    for bits in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if (bits >> i) & 1)


def _bounded_sums(windows, total) -> Iterator[tuple[int, ...]]:
    """Integer tuples within per-coordinate windows with a fixed sum."""
    if not windows:
        if total == 0:
            yield ()
        return
    lo0, hi0 = windows[0]
    rest = windows[1:]
    rest_lo = sum(lo for lo, _ in rest)
    rest_hi = sum(hi for _, hi in rest)
    for x in range(max(lo0, total - rest_hi), min(hi0, total - rest_lo) + 1):
        for tail in _bounded_sums(rest, total - x):
            yield (x,) + tail
