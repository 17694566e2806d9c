import pytest
from hypothesis import given, settings, strategies as st

from vstab import VStability
from vstab.errors import MoveNotApplicable, NotAPartialOrder
from vstab.graphs import mask_of
from vstab.posets import (
    check_deg_witness,
    deg_leq,
    deg_symmetry_classes,
    deg_witness,
    enumerate_degeneracy_subsets,
    enumerate_orbits,
    enumerate_window_stabilities,
    hasse,
    is_maximal,
    is_submaximal,
    lift,
    minimal_elements,
    move_I,
    move_II,
    normal_form,
    orbit_equal,
    qdeg_scan,
    translate,
    translation_witness,
    vstab_leq,
)
from vstab.stability import DegeneracySet

from conftest import banana, k4, path3, single_vertex, triangle


class TestDegEnumeration:
    def test_banana(self):
        degs = enumerate_degeneracy_subsets(banana())
        assert [sorted(d.members) for d in degs] == [[], [1, 2]]

    def test_k4_count_and_classes(self):
        g = k4()
        degs = enumerate_degeneracy_subsets(g)
        assert len(degs) == 19
        reps, _ = deg_symmetry_classes(g, degs)
        assert len(reps) == 7

    def test_difference_closure(self):
        # nested members with biconnected difference keep the difference
        for g in [banana(), triangle(), k4(), path3()]:
            bset = set(g.biconnected_subcurves)
            for d in enumerate_degeneracy_subsets(g):
                for W1 in d.members:
                    for W2 in d.members:
                        if W1 != W2 and W1 & W2 == W1 and (W2 ^ W1) in bset:
                            assert (W2 ^ W1) in d.members


class TestMinimalElements:
    def test_banana_full(self):
        d = DegeneracySet(banana(), frozenset({1, 2}))
        assert minimal_elements(d) == frozenset({1, 2})

    def test_empty(self):
        d = DegeneracySet(banana(), frozenset())
        assert minimal_elements(d) == frozenset()

    def test_k4_four_cycle_class(self):
        g = k4()
        members = frozenset({0b0011, 0b1100, 0b0101, 0b1010})
        d = DegeneracySet(g, members)
        assert minimal_elements(d) == members


class TestDegOrder:
    def test_reflexive_with_empty_witness(self):
        for g in [banana(), triangle()]:
            for d in enumerate_degeneracy_subsets(g):
                assert deg_witness(d, d) == frozenset()

    def test_k4_exceptional_cover(self):
        g = k4()
        D1 = DegeneracySet(g, frozenset({0b0011, 0b1100, 0b0101, 0b1010}))
        D2 = DegeneracySet(g, frozenset(g.biconnected_subcurves))
        assert deg_leq(D1, D2)
        il = mask_of((0, 3))
        diff = D2.members - D1.members
        E = frozenset(S for S in diff if S & ~il == 0 or il & ~S == 0)
        assert check_deg_witness(D1, D2, E)

    def test_k4_containment_without_domination(self):
        g = k4()
        six = DegeneracySet(g, frozenset(
            Y for Y in g.biconnected_subcurves if bin(Y).count("1") == 2
        ))
        full = DegeneracySet(g, frozenset(g.biconnected_subcurves))
        assert six.members < full.members
        assert not deg_leq(six, full)

    def test_stronger_than_inclusion(self):
        # dominance implies inclusion by construction
        g = k4()
        degs = enumerate_degeneracy_subsets(g)
        for a in degs:
            for b in degs:
                if deg_leq(a, b):
                    assert a.members <= b.members


class TestMoves:
    def test_move_one_banana(self):
        d = DegeneracySet(banana(), frozenset({1, 2}))
        out = move_I(d, 1)
        assert out.members == frozenset()

    def test_move_one_requires_minimal_pair(self):
        d = DegeneracySet(banana(), frozenset())
        with pytest.raises(MoveNotApplicable):
            move_I(d, 1)

    def test_move_two_k4(self):
        g = k4()
        full = DegeneracySet(g, frozenset(g.biconnected_subcurves))
        out = move_II(full, 0b0100, 0b1000)
        assert minimal_elements(out) == frozenset({0b0001, 0b0010, 0b1100})
        assert deg_leq(out, full)

    def test_moves_dominate_exhaustively(self):
        for g in [banana(), triangle(), path3(), k4()]:
            for d in enumerate_degeneracy_subsets(g):
                mins = minimal_elements(d)
                for Y in mins:
                    if g.complement(Y) in mins:
                        out = move_I(d, Y)
                        assert deg_leq(out, d)
                bset = set(g.biconnected_subcurves)
                for Y1 in mins:
                    for Y2 in mins:
                        if Y1 < Y2 and not Y1 & Y2 and (Y1 | Y2) in bset:
                            out = move_II(d, Y1, Y2)
                            assert deg_leq(out, d)


class TestVStabOrder:
    def test_lift_identity(self):
        g = banana()
        s = VStability.from_dict(g, 0, {1: 0, 2: 0})
        d = s.degeneracy_set()
        assert lift(d, d, s) == s

    def test_lift_banana(self):
        g = banana()
        s = VStability.from_dict(g, 0, {1: 0, 2: 0})
        d2 = s.degeneracy_set()
        d1 = DegeneracySet(g, frozenset())
        t = lift(d1, d2, s)
        assert t.is_valid and vstab_leq(t, s)
        assert t.degeneracy_set().members == frozenset()
        assert sorted(t.values) == [0, 1]

    def test_degeneracy_map_order_preserving(self):
        # comparable stabilities have dominance-comparable degeneracy sets
        for g in [banana(), triangle(), path3()]:
            stabs = enumerate_window_stabilities(g)
            for s in stabs:
                for t in stabs:
                    if s != t and vstab_leq(s, t):
                        assert deg_leq(s.degeneracy_set(), t.degeneracy_set())

    def test_upper_lifting_exhaustive(self):
        for g in [banana(), triangle(), path3()]:
            degs = enumerate_degeneracy_subsets(g)
            stabs = enumerate_window_stabilities(g)
            by_deg = {}
            for s in stabs:
                by_deg.setdefault(s.degeneracy_set().members, []).append(s)
            for d1 in degs:
                for d2 in degs:
                    if d1.members != d2.members and deg_leq(d1, d2):
                        for s2 in by_deg.get(d2.members, []):
                            s1 = lift(d1, d2, s2)
                            assert vstab_leq(s1, s2)
                            assert s1.degeneracy_set().members == d1.members

    def test_maximal_iff_general(self):
        for g in [banana(), triangle(), path3()]:
            for s in enumerate_window_stabilities(g):
                assert is_maximal(s) == s.is_general()

    def test_submaximal_iff_one_pair(self):
        for g in [banana(), triangle(), path3()]:
            for s in enumerate_window_stabilities(g):
                expected = len(s.degeneracy_set().members) == 2
                assert is_submaximal(s) == expected

    def test_value_dichotomy_for_comparable(self):
        # where s > t: values agree off the degenerate locus of t, and on
        # each newly-degenerate pair exactly one side is bumped by one
        for g in [banana(), triangle()]:
            stabs = enumerate_window_stabilities(g)
            for t in stabs:
                Dt = t.degeneracy_set().members
                for s in stabs:
                    if s == t or not vstab_leq(s, t):
                        continue
                    Ds = s.degeneracy_set().members
                    for Y, Yc in g.bcon_pairs:
                        sv = (s.value(Y), s.value(Yc))
                        tv = (t.value(Y), t.value(Yc))
                        if Y in Ds or Y not in Dt:
                            assert sv == tv
                        else:
                            assert sv in ((tv[0] + 1, tv[1]), (tv[0], tv[1] + 1))


class TestTranslation:
    def test_normal_form_worked_example(self):
        g = banana()
        s = VStability.from_dict(g, 0, {1: 3, 2: -2})
        nf, tau = normal_form(s)
        assert nf.values == (0, 1)
        assert tau == (-3, 3)
        assert translate(s, tau) == nf

    def test_zero_translation(self):
        g = triangle()
        s = enumerate_window_stabilities(g)[0]
        assert translate(s, (0, 0, 0)) == s

    @given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
    @settings(max_examples=40, deadline=None)
    def test_orbit_equal_after_translation(self, tau):
        g = banana()
        s = VStability.from_dict(g, 0, {1: 0, 2: 1})
        assert orbit_equal(s, translate(s, tau))

    def test_translation_preserves_validity_and_degeneracy(self):
        g = triangle()
        for s in enumerate_window_stabilities(g):
            t = translate(s, (2, -1, 3))
            assert t.is_valid
            assert t.degeneracy_set().members == s.degeneracy_set().members

    def test_translation_preserves_order(self):
        g = banana()
        stabs = enumerate_window_stabilities(g)
        for s in stabs:
            for t in stabs:
                if vstab_leq(s, t):
                    assert vstab_leq(translate(s, (1, -2)), translate(t, (1, -2)))

    def test_normal_form_idempotent(self):
        for g in [banana(), triangle(), path3()]:
            for s in enumerate_window_stabilities(g):
                nf, _ = normal_form(s)
                nf2, tau2 = normal_form(nf)
                assert nf2 == nf and set(tau2) == {0}

    def test_witness_search_matches_orbit_equal(self):
        for g in [banana(), path3()]:
            stabs = enumerate_window_stabilities(g)
            for s in stabs:
                for t in stabs:
                    w = translation_witness(s, t)
                    assert (w is not None) == orbit_equal(s, t)
                    if w is not None:
                        assert translate(s, w) == t


class TestOrbits:
    def test_single_vertex(self):
        assert len(enumerate_orbits(single_vertex())) == 1

    def test_banana_two_orbits(self):
        # the window holds three valid assignments but two of them differ
        # by the translation (1, -1), so exactly two orbits remain
        reps = enumerate_orbits(banana())
        assert [r.values for r in reps] == [(0, 0), (0, 1)]
        window = enumerate_window_stabilities(banana())
        assert len(window) == 3

    def test_representatives_are_normal_forms(self):
        for g in [banana(), triangle(), path3(), k4()]:
            for s in enumerate_orbits(g):
                nf, tau = normal_form(s)
                assert nf == s and set(tau) == {0}

    def test_window_covers_every_orbit(self):
        # every valid window stability normalizes onto a listed representative
        for g in [banana(), triangle(), path3(), k4()]:
            reps = enumerate_orbits(g)
            for s in enumerate_window_stabilities(g):
                nf, _ = normal_form(s)
                assert nf in reps

    def test_distinct_orbits(self):
        for g in [banana(), triangle(), path3()]:
            reps = enumerate_orbits(g)
            for i, s in enumerate(reps):
                for t in reps[i + 1:]:
                    assert not orbit_equal(s, t)


class TestHasse:
    def test_chain(self):
        h = hasse([1, 2, 3], lambda a, b: a <= b)
        assert h.covers == ((0, 1), (1, 2))

    def test_not_partial_order(self):
        with pytest.raises(NotAPartialOrder):
            hasse([1, 2], lambda a, b: True)

    def test_k4_class_diagram(self):
        g = k4()
        degs = enumerate_degeneracy_subsets(g)
        reps, assignment = deg_symmetry_classes(g, degs)
        members = [[] for _ in reps]
        for d, k in zip(degs, assignment):
            members[k].append(d)
        keyed = {id(r): i for i, r in enumerate(reps)}

        def class_leq(a, b):
            ka, kb = keyed[id(a)], keyed[id(b)]
            if ka == kb:
                return True
            return any(deg_leq(m, a) for m in members[kb])

        h = hasse(reps, class_leq, label=lambda d: str(sorted(d.members)))
        assert len(h.labels) == 7
        assert len(h.covers) == 8


class TestScan:
    def test_banana_report(self):
        report = qdeg_scan(banana())
        assert report["ranked"] is True
        assert report["rank"] == 1
        assert report["degeneracy_map_surjective"] is True
        assert report["n_orbits"] == 2

    def test_triangle_report(self):
        report = qdeg_scan(triangle())
        assert report["is_partial_order"] is True
        assert report["degeneracy_map_surjective"] is True
