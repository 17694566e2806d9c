import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vstab import (
    NumericalPolarization,
    from_ample,
    from_slopes,
    is_classical,
    translate_polarization,
)
from vstab.errors import InvalidPolarization, InvalidStability
from vstab.posets import enumerate_orbits, translate
from vstab.stability import VStability

from conftest import banana, cycle4, cycle5, k4, path3, triangle


def rational_polarization(g, rng, denominator_bound=12, spread=4):
    """Random exact-rational polarization with a common bounded denominator."""
    q = rng.randint(1, denominator_bound)
    chi = rng.randint(-3, 3)
    nums = [rng.randint(-spread * q, spread * q) for _ in range(g.n - 1)]
    nums.append(chi * q - sum(nums))
    return NumericalPolarization(g, chi, tuple(Fraction(k, q) for k in nums))


class TestValueOn:
    def test_triangle_pair(self):
        p = NumericalPolarization(triangle(), 1, (Fraction(1, 3),) * 3)
        assert p.value_on(0b011) == Fraction(2, 3)

    def test_empty_and_full(self):
        p = NumericalPolarization(triangle(), 1, (Fraction(1, 3),) * 3)
        assert p.value_on(0) == 0
        assert p.value_on(0b111) == 1

    def test_total_mismatch_rejected(self):
        with pytest.raises(InvalidPolarization):
            NumericalPolarization(banana(), 1, (Fraction(1), Fraction(1)))


class TestCeiling:
    def test_triangle_thirds(self):
        p = NumericalPolarization(triangle(), 1, (Fraction(1, 3),) * 3)
        s = p.induced_vstability()
        assert set(s.values) == {1}
        assert s.is_valid and s.is_general()

    def test_banana_integral(self):
        p = NumericalPolarization(banana(), 0, (Fraction(0), Fraction(0)))
        s = p.induced_vstability()
        assert s.values == (0, 0)
        assert s.degeneracy_set().members == frozenset({1, 2})

    @given(st.integers(0, 10**6))
    @settings(max_examples=80, deadline=None)
    def test_random_rational_always_valid(self, seed):
        rng = random.Random(seed)
        g = rng.choice([banana(), triangle(), path3(), cycle4(), cycle5()])
        p = rational_polarization(g, rng)
        s = p.induced_vstability()
        assert s.is_valid
        integral = frozenset(
            Y for Y in g.biconnected_subcurves
            if p.value_on(Y).denominator == 1
        )
        assert s.degeneracy_set().members == integral


class TestClassicalDetection:
    def test_banana_degenerate_forced(self):
        s = VStability.from_dict(banana(), 0, {1: 0, 2: 0})
        w = is_classical(s)
        assert w is not None and w.psi == (Fraction(0), Fraction(0))

    def test_invalid_rejected(self):
        s = VStability.from_dict(banana(), 0, {1: 0, 2: 2})
        with pytest.raises(InvalidStability):
            is_classical(s)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        g = rng.choice([banana(), triangle(), path3(), cycle4()])
        p = rational_polarization(g, rng)
        s = p.induced_vstability()
        w = is_classical(s)
        assert w is not None
        assert w.induced_vstability() == s

    def test_all_small_representatives_classical(self):
        # empirical finding pinned here: every valid stability on these
        # small graphs is a ceiling image, so the decision procedure must
        # return a witness for each representative
        for g in [cycle4(), k4()]:
            for s in enumerate_orbits(g):
                w = is_classical(s)
                assert w is not None
                assert w.induced_vstability() == s


class TestEliminationCore:
    # the infeasible branch never fires on valid small-graph stabilities,
    # so the elimination engine is pinned directly

    def test_strict_cycle_infeasible(self):
        from vstab.polarization import _fm_witness
        # x < 0 and -x < 0 cannot hold together
        assert _fm_witness([((1,), Fraction(0), True), ((-1,), Fraction(0), True)], 1) is None

    def test_weak_cycle_feasible_at_point(self):
        from vstab.polarization import _fm_witness
        out = _fm_witness([((1,), Fraction(0), False), ((-1,), Fraction(0), False)], 1)
        assert out == [Fraction(0)]

    def test_strictness_distinguishes(self):
        from vstab.polarization import _fm_witness
        # x <= 0, -x < 0 infeasible; x <= 0, -x <= 0 feasible
        assert _fm_witness([((1,), Fraction(0), False), ((-1,), Fraction(0), True)], 1) is None
        assert _fm_witness([((1,), Fraction(0), False), ((-1,), Fraction(0), False)], 1) is not None

    def test_two_variable_strict_box(self):
        from vstab.polarization import _fm_witness
        ineqs = [
            ((1, 0), Fraction(1), True), ((-1, 0), Fraction(0), True),
            ((0, 1), Fraction(1), True), ((0, -1), Fraction(0), True),
            ((1, 1), Fraction(1), True),
        ]
        out = _fm_witness(ineqs, 2)
        assert out is not None
        x, y = out
        assert 0 < x < 1 and 0 < y < 1 and x + y < 1

    def test_midpoint_extraction(self):
        from vstab.polarization import _fm_witness
        out = _fm_witness(
            [((1,), Fraction(3), True), ((-1,), Fraction(-1), True)], 1
        )
        assert out == [Fraction(2)]


class TestStandardConstructions:
    def test_from_ample_unit(self):
        p = from_ample(banana(), (1, 1), 1)
        assert p.psi == (Fraction(1, 2), Fraction(1, 2))

    def test_from_ample_integral(self):
        p = from_ample(banana(), (2, 1), 3)
        assert p.psi == (Fraction(2), Fraction(1))
        s = p.induced_vstability()
        assert s.degeneracy_set().members == frozenset({1, 2})

    def test_from_ample_nonpositive_rejected(self):
        with pytest.raises(InvalidPolarization):
            from_ample(banana(), (0, 0), 1)

    def test_from_slopes_characteristic(self):
        p = from_slopes(banana(), (Fraction(-3, 2), Fraction(-3, 2)))
        assert p.chi == 3 and p.psi == (Fraction(3, 2), Fraction(3, 2))

    def test_from_slopes_nonintegral_total_rejected(self):
        with pytest.raises(InvalidPolarization):
            from_slopes(banana(), (Fraction(1, 2), Fraction(0)))

    def test_ample_equals_trivial_plus_dual_bundle(self):
        # the ample-class polarization agrees with the slope polarization
        # of the bundle with deg(L) - 1 trivial summands and one L^(-chi)
        for g in [banana(), triangle(), path3()]:
            for chi in (-2, 0, 1, 3):
                degrees = tuple(range(1, g.n + 1))
                total = sum(degrees)
                p1 = from_ample(g, degrees, chi)
                slopes = tuple(
                    Fraction(-chi * d, total) for d in degrees
                )
                p2 = from_slopes(g, slopes)
                assert p1.psi == p2.psi and p1.chi == p2.chi


class TestTranslation:
    def test_zero_is_identity(self):
        p = from_ample(banana(), (1, 1), 1)
        assert translate_polarization(p, (0, 0)) == p

    def test_total_shifts(self):
        p = from_ample(banana(), (1, 1), 1)
        q = translate_polarization(p, (2, -1))
        assert q.chi == 2 and q.value_on(q.graph.full_mask) == 2

    @given(st.integers(0, 10**6), st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)))
    @settings(max_examples=50, deadline=None)
    def test_ceiling_equivariance(self, seed, tau):
        rng = random.Random(seed)
        g = triangle()
        p = rational_polarization(g, rng)
        shifted = translate_polarization(p, tau)
        assert shifted.induced_vstability() == translate(
            p.induced_vstability(), tau
        )
