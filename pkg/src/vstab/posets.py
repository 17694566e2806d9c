"""Posets of degeneracy subsets and of V-stabilities, translation action,
normal forms, orbit enumeration, and the evidence scanner.

The dominance order on degeneracy subsets is decided by an explicit search
for a witness subset E (one binary choice per complementary pair, pruned
by the pair and triple constraints).  Orbit enumeration walks the
tree-cut-normalized candidate window with constraint propagation and keeps
the stabilities that are their own normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from .errors import (
    LiftImpossible,
    MoveNotApplicable,
    NotAPartialOrder,
)
from .graphs import DualGraph, permute_mask, vertices_of
from .stability import (
    DegeneracySet,
    VStability,
    _admissible_pairs,
)

# -- degeneracy subsets ---------------------------------------------------------


def enumerate_degeneracy_subsets(g: DualGraph) -> list[DegeneracySet]:
    """All subsets of the biconnected subcurves closed under complement and
    disjoint-union-into-biconnected, smallest first."""
    pairs = g.bcon_pairs
    closures = _admissible_pairs(g)
    out = []
    for bits in range(1 << len(pairs)):
        members = set()
        for i, (Y, Yc) in enumerate(pairs):
            if (bits >> i) & 1:
                members.add(Y)
                members.add(Yc)
        if all(
            U in members
            for A, B, U in closures
            if A in members and B in members
        ):
            out.append(DegeneracySet(g, frozenset(members)))
    out.sort(key=lambda d: (len(d.members), sorted(d.members)))
    return out


def minimal_elements(D: DegeneracySet) -> frozenset[int]:
    """Members admitting no proper difference-decomposition within D.

    Every member must decompose uniquely as a disjoint union of minimal
    elements; that uniqueness is verified here.
    """
    g = D.graph
    bset = set(g.biconnected_subcurves)
    mins = frozenset(
        Y for Y in D.members
        if not any(
            W != Y and W & Y == W and (Y ^ W) in bset
            for W in D.members
        )
    )
    for Y in D.members:
        if _count_decompositions(Y, sorted(mins)) != 1:
            raise AssertionError(
                f"member {Y:b} lacks a unique minimal decomposition"
            )
    return mins


def _count_decompositions(Y: int, mins: list[int]) -> int:
    if Y == 0:
        return 1
    low = Y & (-Y)
    total = 0
    for m in mins:
        if m & low and m & Y == m:
            total += _count_decompositions(Y ^ m, mins)
    return total


def deg_witnesses(D1: DegeneracySet, D2: DegeneracySet) -> Iterator[frozenset[int]]:
    """Witness subsets E certifying D1 >= D2, in a deterministic order.

    E picks one member of each complementary pair of D2 - D1; every
    disjoint pair in D2 - D1 whose union lies in D1 must meet E exactly
    once, and every pairwise-disjoint covering triple in D2 - D1 must meet
    E once or twice.
    """
    if D1.graph != D2.graph:
        return
    if not D1.members <= D2.members:
        return
    g = D1.graph
    diff = D2.members - D1.members
    if not diff:
        yield frozenset()
        return
    full = g.full_mask
    pairs = sorted(
        {(min(Y, full ^ Y), max(Y, full ^ Y)) for Y in diff}
    )
    index = {}
    for i, (a, b) in enumerate(pairs):
        index[a] = (i, 0)
        index[b] = (i, 1)

    xor_cons = []      # ((pair, side), (pair, side)) -> exactly one in E
    for Z1 in diff:
        for Z2 in diff:
            if Z1 < Z2 and not Z1 & Z2 and (Z1 | Z2) in D1.members:
                xor_cons.append((index[Z1], index[Z2]))
    triple_cons = []   # three (pair, side) -> one or two in E
    dlist = sorted(diff)
    for i, Z1 in enumerate(dlist):
        for j in range(i + 1, len(dlist)):
            Z2 = dlist[j]
            if Z1 & Z2:
                continue
            Z3 = full ^ (Z1 | Z2)
            if Z3 > Z2 and Z3 in diff:
                triple_cons.append((index[Z1], index[Z2], index[Z3]))

    choice = [None] * len(pairs)

    def in_E(pair, side):
        c = choice[pair]
        if c is None:
            return None
        return c == side

    def consistent():
        for a, b in xor_cons:
            va, vb = in_E(*a), in_E(*b)
            if va is not None and vb is not None and va == vb:
                return False
        for a, b, c in triple_cons:
            vs = [in_E(*a), in_E(*b), in_E(*c)]
            if None not in vs and sum(vs) not in (1, 2):
                return False
        return True

    def walk(i) -> Iterator[frozenset[int]]:
        if i == len(pairs):
            yield frozenset(
                pairs[p][side] for p, side in
                ((p, choice[p]) for p in range(len(pairs)))
            )
            return
        for side in (0, 1):
            choice[i] = side
            if consistent():
                yield from walk(i + 1)
        choice[i] = None

    yield from walk(0)


def deg_leq(D1: DegeneracySet, D2: DegeneracySet) -> bool:
    """Dominance D1 >= D2 (strictly stronger than inclusion D1 <= D2)."""
    return next(deg_witnesses(D1, D2), None) is not None


def deg_witness(D1: DegeneracySet, D2: DegeneracySet) -> Optional[frozenset[int]]:
    return next(deg_witnesses(D1, D2), None)


def check_deg_witness(D1: DegeneracySet, D2: DegeneracySet, E: frozenset[int]) -> bool:
    """Whether a specific E certifies D1 >= D2."""
    if not D1.members <= D2.members:
        return False
    g = D1.graph
    full = g.full_mask
    diff = D2.members - D1.members
    Ec = frozenset(full ^ Y for Y in E)
    if E | Ec != diff or E & Ec:
        return False
    for Z1 in diff:
        for Z2 in diff:
            if Z1 < Z2 and not Z1 & Z2 and (Z1 | Z2) in D1.members:
                if (Z1 in E) + (Z2 in E) != 1:
                    return False
    dlist = sorted(diff)
    for i, Z1 in enumerate(dlist):
        for j in range(i + 1, len(dlist)):
            Z2 = dlist[j]
            if Z1 & Z2:
                continue
            Z3 = full ^ (Z1 | Z2)
            if Z3 > Z2 and Z3 in diff:
                if (Z1 in E) + (Z2 in E) + (Z3 in E) not in (1, 2):
                    return False
    return True


# -- elementary moves -----------------------------------------------------------


def _closure_from(g: DualGraph, generators: Iterable[int]) -> frozenset[int]:
    """Disjoint-union closure of a set of biconnected subcurves."""
    bset = set(g.biconnected_subcurves)
    members = set(generators)
    grew = True
    while grew:
        grew = False
        snapshot = sorted(members)
        for i, A in enumerate(snapshot):
            for B in snapshot[i + 1:]:
                if not A & B:
                    U = A | B
                    if U in bset and U not in members:
                        members.add(U)
                        grew = True
    return frozenset(members)


def move_drop_pair(D: DegeneracySet, Y: int) -> DegeneracySet:
    """Move I: delete a complementary pair of minimal elements."""
    g = D.graph
    Yc = g.complement(Y)
    mins = minimal_elements(D)
    if Y not in mins or Yc not in mins:
        raise MoveNotApplicable("both halves of the pair must be minimal")
    gens = set(mins) - {Y, Yc}
    result = DegeneracySet(g, _closure_from(g, gens))
    if not deg_leq(result, D):
        raise AssertionError("move result does not dominate its input")
    return result


def move_merge_pair(D: DegeneracySet, Y1: int, Y2: int) -> DegeneracySet:
    """Move II: replace two disjoint minimal elements by their biconnected
    union."""
    g = D.graph
    mins = minimal_elements(D)
    if Y1 not in mins or Y2 not in mins or Y1 & Y2:
        raise MoveNotApplicable("arguments must be disjoint minimal elements")
    U = Y1 | Y2
    if U not in set(g.biconnected_subcurves):
        raise MoveNotApplicable("the union must be biconnected")
    gens = (set(mins) - {Y1, Y2}) | {U}
    result = DegeneracySet(g, _closure_from(g, gens))
    if not deg_leq(result, D):
        raise AssertionError("move result does not dominate its input")
    return result


move_I = move_drop_pair
move_II = move_merge_pair


# -- the poset of V-stabilities ---------------------------------------------------


def vstab_leq(s: VStability, t: VStability) -> bool:
    """Order on V-stabilities: s >= t iff same characteristic and every
    stored value of s dominates the one of t."""
    if s.graph != t.graph or s.chi != t.chi:
        return False
    return all(a >= b for a, b in zip(s.values, t.values))


def lift(D1: DegeneracySet, D2: DegeneracySet, s2: VStability) -> VStability:
    """Upper lift: a stability s1 >= s2 with degeneracy set D1, for
    D1 >= D2 = degeneracy set of s2.  Bumps s2 by one on a witness E."""
    if s2.degeneracy_set().members != D2.members:
        raise ValueError("s2 must have degeneracy set D2")
    found_witness = False
    for E in deg_witnesses(D1, D2):
        found_witness = True
        mapping = s2.as_dict()
        for Y in E:
            mapping[Y] += 1
        s1 = VStability.from_dict(s2.graph, s2.chi, mapping)
        if s1.is_valid and s1.degeneracy_set().members == D1.members:
            return s1
    if not found_witness:
        raise ValueError("lift requires D1 >= D2 in the dominance order")
    raise LiftImpossible("no witness produced a valid lift")


def dominating_stabilities(s: VStability) -> Iterator[VStability]:
    """All valid t > s.  The pair-sum constraint confines candidates to
    bumping one side of each degenerate pair by one."""
    s._require_valid()
    g = s.graph
    deg_pairs = [
        (Y, Yc) for Y, Yc in g.bcon_pairs if s.is_degenerate(Y)
    ]
    options = []
    for Y, Yc in deg_pairs:
        options.append(((Y, 0), (Y, 1), (Yc, 1)))

    def walk(i, mapping, changed):
        if i == len(options):
            if changed:
                t = VStability.from_dict(g, s.chi, mapping)
                if t.is_valid:
                    yield t
            return
        for Y, bump in options[i]:
            mapping2 = dict(mapping)
            mapping2[Y] += bump
            yield from walk(i + 1, mapping2, changed or bump)

    yield from walk(0, s.as_dict(), False)


def is_maximal(s: VStability) -> bool:
    return next(dominating_stabilities(s), None) is None


def is_submaximal(s: VStability) -> bool:
    """Not maximal, and dominated only by maximal elements."""
    doms = list(dominating_stabilities(s))
    return bool(doms) and all(is_maximal(t) for t in doms)


# -- translation action -----------------------------------------------------------


def translate(s: VStability, tau) -> VStability:
    """Shift by an integer vector: adds the tau-sum over each subcurve and
    moves the characteristic by the total."""
    g = s.graph
    tau = tuple(int(t) for t in tau)
    if len(tau) != g.n:
        raise ValueError("one integer per component required")
    bcon = g.biconnected_subcurves
    values = tuple(
        v + sum(tau[x] for x in vertices_of(Y))
        for v, Y in zip(s.values, bcon)
    )
    return VStability(g, s.chi + sum(tau), values)


def normal_form(s: VStability) -> tuple[VStability, tuple[int, ...]]:
    """Translation-orbit representative with characteristic 0 and the
    tree-cut pattern: value 0 on every parent side, 0 or 1 on the child
    side depending on degeneracy.  Returns (representative, tau) with
    representative == translate(s, tau)."""
    s._require_valid()
    g = s.graph
    tree = g.spanning_tree
    full = g.full_mask
    # target tau-sum over each child subtree
    target = {}
    for (p, c), child in zip(tree.edges, tree.child_masks):
        parent_side = full ^ child
        if s.is_degenerate(parent_side):
            target[c] = -s.value(child)
        else:
            target[c] = -s.value(child) + 1
    subtree_total = {0: -s.chi}
    subtree_total.update(target)
    tau = [0] * g.n
    for v in range(g.n):
        tau[v] = subtree_total[v] - sum(
            subtree_total[c] for c in tree.children[v]
        )
    nf = translate(s, tau)
    return nf, tuple(tau)


def orbit_equal(s: VStability, t: VStability) -> bool:
    """Equivalence by translation, decided by comparing normal forms."""
    if s.graph != t.graph:
        return False
    return normal_form(s)[0] == normal_form(t)[0]


def translation_witness(s: VStability, t: VStability, bound: Optional[int] = None):
    """Integer vector tau with t == translate(s, tau), or None.

    Solved through the tree-cut coordinates, then verified on every
    biconnected subcurve; with ``bound`` set, reject witnesses with an
    entry exceeding it in absolute value.
    """
    if s.graph != t.graph:
        return None
    g = s.graph
    tree = g.spanning_tree
    subtree_total = {0: t.chi - s.chi}
    for (p, c), child in zip(tree.edges, tree.child_masks):
        subtree_total[c] = t.value(child) - s.value(child)
    tau = [0] * g.n
    for v in range(g.n):
        tau[v] = subtree_total[v] - sum(
            subtree_total[c] for c in tree.children[v]
        )
    if translate(s, tau) != t:
        return None
    if bound is not None and any(abs(x) > bound for x in tau):
        return None
    return tuple(tau)


# -- orbit enumeration -------------------------------------------------------------


def stability_window(g: DualGraph) -> dict[int, tuple[int, int]]:
    """Per-subcurve value window for characteristic-0 representatives:
    1 - tree valence <= value <= tree valence."""
    tree = g.spanning_tree
    out = {}
    for Y in g.biconnected_subcurves:
        val = tree.valence(Y)
        out[Y] = (1 - val, val)
    return out


def enumerate_window_stabilities(g: DualGraph, *, tree_cut_pattern: bool = False) -> list[VStability]:
    """All valid characteristic-0 stabilities inside the tree-valence
    window, by a pruned pair-by-pair search.

    With ``tree_cut_pattern`` the tree-cut pairs are pinned to the
    normal-form pattern (0 on the parent side, 0 or 1 on the child side),
    which is the candidate set for orbit enumeration.
    """
    full = g.full_mask
    pairs = g.bcon_pairs
    window = stability_window(g)
    cut_sides = {}
    for parent_side, child_side in g.spanning_tree.cut_pairs():
        cut_sides[frozenset((parent_side, child_side))] = (parent_side, child_side)

    options = []
    for Y, Yc in pairs:
        cut = cut_sides.get(frozenset((Y, Yc)))
        opts = []
        if tree_cut_pattern and cut is not None:
            parent_side, child_side = cut
            for b in (0, 1):
                val = {parent_side: 0, child_side: b}
                opts.append((val[Y], val[Yc]))
        else:
            lo1, hi1 = window[Y]
            lo2, hi2 = window[Yc]
            for a in range(lo1, hi1 + 1):
                for b in (-a, 1 - a):
                    if lo2 <= b <= hi2:
                        opts.append((a, b))
        options.append(opts)

    pair_of = {}
    for i, (Y, Yc) in enumerate(pairs):
        pair_of[Y] = i
        pair_of[Yc] = i
    cons_by_depth: list[list[tuple[int, int, int]]] = [[] for _ in pairs]
    for A, B, U in _admissible_pairs(g):
        depth = max(pair_of[A], pair_of[B], pair_of[U])
        cons_by_depth[depth].append((A, B, U))

    values: dict[int, int] = {}
    out = []

    def degenerate(Y):
        return values[Y] + values[full ^ Y] == 0

    def ok(depth):
        for A, B, U in cons_by_depth[depth]:
            delta = values[U] - values[A] - values[B]
            if degenerate(A) or degenerate(B):
                if delta != 0:
                    return False
            elif degenerate(U):
                if delta != -1:
                    return False
            elif delta not in (0, -1):
                return False
        return True

    def walk(depth):
        if depth == len(pairs):
            out.append(VStability.from_dict(g, 0, dict(values)))
            return
        Y, Yc = pairs[depth]
        for a, b in options[depth]:
            values[Y] = a
            values[Yc] = b
            if ok(depth):
                walk(depth + 1)
        values.pop(Y, None)
        values.pop(Yc, None)

    walk(0)
    for s in out:
        if not s.is_valid:
            raise AssertionError("pruned search admitted an invalid stability")
    return out


def enumerate_orbits(g: DualGraph) -> list[VStability]:
    """Complete, duplicate-free translation-orbit representatives at
    characteristic 0: window candidates that are their own normal form."""
    reps = [
        s for s in enumerate_window_stabilities(g, tree_cut_pattern=True)
        if normal_form(s)[0] == s
    ]
    reps.sort(key=lambda s: s.values)
    return reps


# -- Hasse diagrams ------------------------------------------------------------------


@dataclass(frozen=True)
class HasseDiagram:
    """Transitive reduction of a finite poset; covers go (lower, upper)."""

    labels: tuple[str, ...]
    covers: tuple[tuple[int, int], ...]


def hasse(elements: list, leq: Callable, label: Callable = str) -> HasseDiagram:
    """Hasse diagram of a finite poset given by a leq predicate."""
    n = len(elements)
    lt = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and leq(elements[i], elements[j]):
                lt[i][j] = True
    for i in range(n):
        for j in range(n):
            if lt[i][j] and lt[j][i]:
                raise NotAPartialOrder("relation is not antisymmetric")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if lt[i][j] and lt[j][k] and not lt[i][k]:
                    raise NotAPartialOrder("relation is not transitive")
    covers = tuple(
        (i, j) for i in range(n) for j in range(n)
        if lt[i][j] and not any(lt[i][k] and lt[k][j] for k in range(n))
    )
    return HasseDiagram(tuple(label(e) for e in elements), covers)


# -- symmetry reduction ---------------------------------------------------------------


def deg_symmetry_key(g: DualGraph, members: frozenset[int]) -> tuple[int, ...]:
    """Canonical form of a degeneracy subset under graph automorphisms."""
    best = None
    for perm in g.automorphisms:
        image = tuple(sorted(permute_mask(Y, perm) for Y in members))
        if best is None or image < best:
            best = image
    return best


def deg_symmetry_classes(g: DualGraph, degs: list[DegeneracySet]):
    """Group degeneracy subsets into automorphism classes; returns
    (representatives, class index per input)."""
    classes: dict[tuple, int] = {}
    reps: list[DegeneracySet] = []
    assignment = []
    for d in degs:
        key = deg_symmetry_key(g, d.members)
        if key not in classes:
            classes[key] = len(reps)
            reps.append(d)
        assignment.append(classes[key])
    return reps, assignment


# -- evidence scanner -------------------------------------------------------------------


def _all_maximal_chains_equal(n: int, covers: list[tuple[int, int]]):
    """(ranked, common length) for the DAG of cover relations."""
    ups = [[] for _ in range(n)]     # covers above each node
    downs = [[] for _ in range(n)]   # covers below each node
    for lo, hi in covers:
        ups[lo].append(hi)
        downs[hi].append(lo)

    def chain_stats(neighbors):
        memo = {}

        def go(v):
            if v in memo:
                return memo[v]
            if not neighbors[v]:
                memo[v] = (0, 0)
            else:
                vals = [go(w) for w in neighbors[v]]
                memo[v] = (
                    1 + min(a for a, _ in vals),
                    1 + max(b for _, b in vals),
                )
            return memo[v]

        return [go(v) for v in range(n)]

    up = chain_stats(ups)
    down = chain_stats(downs)
    totals = set()
    for v in range(n):
        lo = up[v][0] + down[v][0]
        hi = up[v][1] + down[v][1]
        if lo != hi:
            return False, None
        totals.add(lo)
    if len(totals) != 1:
        return False, None
    return True, totals.pop()


def qdeg_scan(g: DualGraph) -> dict:
    """Evidence report for one graph: is the dominance poset of degeneracy
    subsets ranked (and of what rank), and is the degeneracy map from
    stability orbits onto it surjective?"""
    degs = enumerate_degeneracy_subsets(g)
    k = len(degs)
    ge_row = [0] * k        # bit j set in ge_row[i] iff D_i > D_j
    for i in range(k):
        for j in range(k):
            if i != j and degs[i].members <= degs[j].members and deg_leq(degs[i], degs[j]):
                ge_row[i] |= 1 << j
    is_po = True
    for i in range(k):
        for j in vertices_of(ge_row[i]):
            if (ge_row[j] >> i) & 1 or ge_row[j] & ~ge_row[i]:
                is_po = False
                break
        if not is_po:
            break
    ranked = rank = None
    if is_po:
        up_col = [0] * k     # bit l set in up_col[j] iff D_l > D_j
        for i in range(k):
            for j in vertices_of(ge_row[i]):
                up_col[j] |= 1 << i
        covers = [
            (j, i) for i in range(k) for j in vertices_of(ge_row[i])
            if not ge_row[i] & up_col[j]
        ]
        ranked, rank = _all_maximal_chains_equal(k, covers)
    reps = enumerate_orbits(g)
    realized = {s.degeneracy_set().members for s in reps}
    surjective = {d.members for d in degs} <= realized
    return {
        "genera": list(g.genera),
        "edges": [list(e) for e in g.edges],
        "n_biconnected": len(g.biconnected_subcurves),
        "n_degeneracy_subsets": k,
        "is_partial_order": is_po,
        "ranked": ranked,
        "rank": rank,
        "expected_rank": g.n - 1,
        "degeneracy_map_surjective": surjective,
        "n_orbits": len(reps),
    }
