"""V-stability conditions on a dual graph.

A V-stability condition of characteristic chi assigns an integer to every
biconnected subcurve, subject to the pair-sum constraint (the value on Y
plus the value on its complement minus chi lies in {0,1}) and constraints
on every triple of pairwise-disjoint biconnected subcurves covering the
curve.  Both the triple-based validator and the equivalent pair-union
validator are implemented; they are cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DomainMismatch, EmptySubcurve, InvalidStability, NotDegenerate
from .graphs import Contraction, DualGraph, vertices_of


@dataclass(frozen=True)
class Violation:
    kind: str                     # "pair-sum" | "triple-closure" | "triple-sum" | "pair-union"
    subcurves: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class VStability:
    """Integer assignment on biconnected subcurves, of characteristic chi.

    ``values`` is aligned with ``graph.biconnected_subcurves``.  Unset keys
    are a hard error in :meth:`from_dict`, never defaulted.
    """

    graph: DualGraph
    chi: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.graph.biconnected_subcurves):
            raise DomainMismatch(
                "values must be aligned with the biconnected subcurves"
            )
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @classmethod
    def from_dict(cls, graph: DualGraph, chi: int, mapping: dict[int, int]) -> "VStability":
        bcon = graph.biconnected_subcurves
        if set(mapping) != set(bcon):
            missing = sorted(set(bcon) - set(mapping))
            extra = sorted(set(mapping) - set(bcon))
            raise DomainMismatch(
                f"values must be keyed exactly by the biconnected subcurves "
                f"(missing {missing}, extra {extra})"
            )
        return cls(graph, chi, tuple(mapping[Y] for Y in bcon))

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.graph.biconnected_subcurves, self.values))

    def value(self, Y: int) -> int:
        idx = self.graph.bcon_index.get(Y)
        if idx is None:
            raise DomainMismatch(f"subcurve {Y:b} is not biconnected")
        return self.values[idx]

    def is_degenerate(self, Y: int) -> bool:
        """Pair-sum test on a biconnected subcurve."""
        return self.value(Y) + self.value(self.graph.complement(Y)) == self.chi

    # -- validation ---------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Check the pair-sum constraint and both triple constraints.

        All violations are reported, not just the first.
        """
        g = self.graph
        out: list[Violation] = []
        for Y, Yc in g.bcon_pairs:
            t = self.value(Y) + self.value(Yc) - self.chi
            if t not in (0, 1):
                out.append(Violation(
                    "pair-sum", (Y, Yc),
                    f"value sum minus chi is {t}, expected 0 or 1",
                ))
        for Y1, Y2, Y3 in _covering_triples(g):
            dgs = [self.is_degenerate(Z) for Z in (Y1, Y2, Y3)]
            ndeg = sum(dgs)
            sigma = self.value(Y1) + self.value(Y2) + self.value(Y3) - self.chi
            if ndeg == 2:
                out.append(Violation(
                    "triple-closure", (Y1, Y2, Y3),
                    "two members degenerate but not the third",
                ))
                continue
            expected = {3: (0,), 1: (1,), 0: (1, 2)}[ndeg]
            if sigma not in expected:
                out.append(Violation(
                    "triple-sum", (Y1, Y2, Y3),
                    f"triple sum minus chi is {sigma}, expected one of {expected}",
                ))
        return ValidationReport(tuple(out))

    def validate_via_union(self) -> ValidationReport:
        """Equivalent validation via the pair-union constraint.

        Must agree with :meth:`validate` on every input; the agreement is
        asserted wholesale in the test suite.
        """
        g = self.graph
        out: list[Violation] = []
        for Y, Yc in g.bcon_pairs:
            t = self.value(Y) + self.value(Yc) - self.chi
            if t not in (0, 1):
                out.append(Violation(
                    "pair-sum", (Y, Yc),
                    f"value sum minus chi is {t}, expected 0 or 1",
                ))
        for Y1, Y2, U in _admissible_pairs(g):
            delta = self.value(U) - self.value(Y1) - self.value(Y2)
            d1, d2, dU = (self.is_degenerate(Z) for Z in (Y1, Y2, U))
            if d1 or d2:
                expected = (0,)
            elif dU:
                expected = (-1,)
            else:
                expected = (0, -1)
            if delta not in expected:
                out.append(Violation(
                    "pair-union", (Y1, Y2, U),
                    f"union defect is {delta}, expected one of {expected}",
                ))
        return ValidationReport(tuple(out))

    @cached_property
    def is_valid(self) -> bool:
        return self.validate().ok

    def _require_valid(self):
        if not self.is_valid:
            raise InvalidStability("operation requires a valid V-stability")

    # -- degeneracy ----------------------------------------------------------

    def degeneracy_set(self) -> "DegeneracySet":
        self._require_valid()
        members = frozenset(
            Y for Y in self.graph.biconnected_subcurves if self.is_degenerate(Y)
        )
        return DegeneracySet(self.graph, members)

    def is_general(self) -> bool:
        self._require_valid()
        return not any(self.is_degenerate(Y) for Y in self.graph.biconnected_subcurves)

    @cached_property
    def extended_degeneracy(self) -> frozenset[int]:
        """Connected subcurves whose complement components are all degenerate,
        plus the whole curve."""
        self._require_valid()
        g = self.graph
        full = g.full_mask
        out = {full}
        for W in g.connected_subcurves:
            if W == full:
                continue
            if all(self.is_degenerate(Z) for Z in g.connected_components(full ^ W)):
                out.add(W)
        return frozenset(out)

    def extended_value(self, Y: int) -> int:
        """Value of the extended V-function on any nonempty subcurve.

        Computed on demand from the stored biconnected values.
        """
        if Y == 0:
            raise EmptySubcurve("the extended V-function needs a nonempty subcurve")
        g = self.graph
        idx = g.bcon_index.get(Y)
        if idx is not None:
            return self.values[idx]
        if Y == g.full_mask:
            return self.chi
        pieces = g.connected_components(Y)
        if len(pieces) > 1:
            return sum(self.extended_value(W) for W in pieces)
        total = self.chi
        for Z in g.connected_components(g.complement(Y)):
            total -= self.value(Z)
            if not self.is_degenerate(Z):
                total += 1
        return total

    # -- restriction and pullback ---------------------------------------------

    def restrict(self, Y: int) -> "VStability":
        """Restriction to a subcurve of the extended degeneracy set, as a
        V-stability on the induced graph of Y."""
        self._require_valid()
        if Y not in self.extended_degeneracy:
            raise NotDegenerate(
                f"subcurve {Y:b} is not in the extended degeneracy set"
            )
        sub, verts = self.graph.induced(Y)
        embed = {i: 1 << v for i, v in enumerate(verts)}

        def embed_mask(m):
            out = 0
            for i in vertices_of(m):
                out |= embed[i]
            return out

        values = tuple(
            self.extended_value(embed_mask(W)) for W in sub.biconnected_subcurves
        )
        return VStability(sub, self.extended_value(Y), values)


def pullback(s: VStability, c: Contraction) -> VStability:
    """Pullback of a V-stability along a contraction.

    The input lives on the contraction source (the finer graph); the result
    lives on the contracted graph, with each value read off at the
    degeneration (union of fibers) of the subcurve.  The degeneracy set of
    the result is the preimage of the degeneracy set of the input under
    that map.
    """
    if s.graph != c.source:
        raise DomainMismatch("stability is not defined on the contraction source")
    target = c.target
    values = tuple(s.value(c.pushforward(Y)) for Y in target.biconnected_subcurves)
    return VStability(target, s.chi, values)


@dataclass(frozen=True)
class DegeneracySet:
    """Subset of the biconnected subcurves closed under complement and under
    disjoint union when the union is again biconnected."""

    graph: DualGraph
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        bcon = set(self.graph.biconnected_subcurves)
        if not self.members <= bcon:
            raise DomainMismatch("members must be biconnected subcurves")
        full = self.graph.full_mask
        for Y in self.members:
            if full ^ Y not in self.members:
                raise ValueError(f"not closed under complement at {Y:b}")
        for A, B, U in _admissible_pairs(self.graph):
            if A in self.members and B in self.members and U not in self.members:
                raise ValueError(
                    f"not closed under disjoint union at {A:b}, {B:b}"
                )

    def __contains__(self, Y: int) -> bool:
        return Y in self.members

    def __len__(self) -> int:
        return len(self.members)


# -- shared enumeration helpers ------------------------------------------------


def _covering_triples(g: DualGraph) -> tuple[tuple[int, int, int], ...]:
    """Unordered triples of pairwise-disjoint biconnected subcurves covering
    the whole curve, cached on the graph."""
    cache = getattr(g, "_triple_cache", None)
    if cache is not None:
        return cache
    bcon = g.biconnected_subcurves
    bset = set(bcon)
    full = g.full_mask
    seen = set()
    out = []
    for i, Y1 in enumerate(bcon):
        for Y2 in bcon[i + 1:]:
            if Y1 & Y2:
                continue
            Y3 = full ^ (Y1 | Y2)
            if Y3 == 0 or Y3 not in bset:
                continue
            key = frozenset((Y1, Y2, Y3))
            if key in seen:
                continue
            seen.add(key)
            out.append(tuple(sorted((Y1, Y2, Y3))))
    result = tuple(sorted(out))
    object.__setattr__(g, "_triple_cache", result)
    return result


def _admissible_pairs(g: DualGraph) -> tuple[tuple[int, int, int], ...]:
    """Unordered disjoint biconnected pairs whose union is biconnected,
    listed as (Y1, Y2, union), cached on the graph."""
    cache = getattr(g, "_pair_cache", None)
    if cache is not None:
        return cache
    bcon = g.biconnected_subcurves
    bset = set(bcon)
    out = []
    for i, Y1 in enumerate(bcon):
        for Y2 in bcon[i + 1:]:
            if Y1 & Y2:
                continue
            U = Y1 | Y2
            if U in bset:
                out.append((Y1, Y2, U))
    result = tuple(out)
    object.__setattr__(g, "_pair_cache", result)
    return result


def extended_value_table(s: VStability) -> list[int]:
    """Extended V-function tabulated over every subcurve mask (index =
    mask), built on first demand for hot loops and stashed on the
    stability; the empty subcurve is mapped to 0 for the callers'
    convenience."""
    table = s.__dict__.get("_ext_table")
    if table is None:
        g = s.graph
        table = [0] * (g.full_mask + 1)
        for Y in range(1, g.full_mask + 1):
            table[Y] = s.extended_value(Y)
        s.__dict__["_ext_table"] = table
    return table
