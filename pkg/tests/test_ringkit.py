import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbzeta.ringkit import (
    EULER,
    WEIGHT,
    LPoly,
    NotPolynomialCountError,
    QPoly,
    QSeries,
    Ring,
    RingMismatchError,
    SubstitutionError,
    WPoly,
    interpolate_exact,
    laurent_substitute,
    series_invert_unit,
    specialize,
)
from strategies import lpolys, qpolys, qseries, substitutable, unit_series

L = LPoly.gen()
t = WPoly.gen()
LEF = Ring.LEFSCHETZ


def lq(*cs):
    return QPoly(LEF, cs)


class TestPolynomialArithmetic:
    def test_difference_of_squares(self):
        assert (1 + L) * (1 - L) == 1 - L**2

    def test_unit_power(self):
        p = LPoly([3, -1, 4])
        assert L**0 * p == p

    def test_coefficientwise_addition(self):
        assert LPoly([1, 2, 3]) + LPoly([1, 1]) == LPoly([2, 3, 3])

    def test_trailing_zeros_trimmed(self):
        assert LPoly([1, 0, 0]).coeffs == (1,)
        assert LPoly().degree == -1
        assert LPoly([0, 0, 5]).valuation == 2

    def test_rendering(self):
        assert str(LPoly([1, 2, 1])) == "1 + 2*L + L^2"
        assert str(L**3 - 1) == "-1 + L^3"
        assert str(LPoly()) == "0"
        assert str(WPoly([0, 1, 3])) == "t + 3*t^2"
        assert str(lq(1, -1, L)) == "1 - q + q^2*L"
        assert str(lq(0, LPoly([1, 2]))) == "q*(1 + 2*L)"

    def test_shift_below_zero(self):
        with pytest.raises(SubstitutionError):
            L.shift(-2)
        assert (L**2).shift(-1) == L

    def test_evaluation(self):
        assert LPoly([1, 2, 1])(1) == 4
        assert LPoly([1, 1])(7) == 8

    def test_rings_do_not_mix(self):
        with pytest.raises(RingMismatchError):
            lq(1) + QPoly(Ring.WEIGHT, [1])
        with pytest.raises(RingMismatchError):
            L + t

    @given(lpolys(), lpolys(), lpolys())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a - a == LPoly()

    @given(qpolys(), qpolys())
    def test_qpoly_product_degree(self, a, b):
        if a and b:
            assert (a * b).degree == a.degree + b.degree

    @given(qpolys())
    def test_json_terms_round_trip(self, z):
        assert QPoly.from_json_terms(LEF, z.terms()) == z

    def test_qpoly_integer_coercion(self):
        assert lq(1, -1, L) + 1 == lq(2, -1, L)
        assert QPoly.one(LEF) == lq(1)


class TestSeries:
    def test_geometric(self):
        inv = series_invert_unit(lq(1, -1).to_series(5))
        assert inv.coeffs == tuple(LPoly(1) for _ in range(6))

    def test_geometric_in_qL(self):
        inv = series_invert_unit(lq(1, -L).to_series(5))
        assert inv.coeffs == tuple(L**k for k in range(6))

    def test_invert_node_factor(self):
        u = lq(1, -1, L).to_series(8)
        assert series_invert_unit(u) * u == lq(1).to_series(8)

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            series_invert_unit(lq(2, 1).to_series(3))

    def test_truncation_enforced(self):
        s = lq(1, 1).to_series(3)
        assert s.coefficient(3) == LPoly()
        with pytest.raises(IndexError):
            s.coefficient(4)

    def test_min_truncation(self):
        a = lq(1, 1).to_series(3)
        b = lq(1, 1).to_series(5)
        assert (a * b).truncation == 3
        assert (a + b).truncation == 3

    def test_rendering(self):
        assert str(lq(1, -1, L).to_series(3)) == "1 - q + q^2*L + O(q^4)"

    @given(unit_series())
    def test_inverse_is_two_sided(self, u):
        one = lq(1).to_series(u.truncation)
        inv = series_invert_unit(u)
        assert inv * u == one
        assert u * inv == one
        assert series_invert_unit(inv) == u

    @given(qseries(truncation=6), qseries(truncation=6))
    def test_first_mismatch(self, a, b):
        d = a.first_mismatch(b)
        if d is None:
            assert a == b
        else:
            assert a.coeffs[d] != b.coeffs[d]
            assert a.coeffs[:d] == b.coeffs[:d]


class TestLaurentSubstitute:
    def test_node_fixed(self):
        assert laurent_substitute(lq(1, -1, L), 1) == lq(1, -1, L)

    def test_trivial(self):
        assert laurent_substitute(lq(1), 0) == lq(1)

    def test_self_dual_stratum_term(self):
        # 1 - qL + q^2 L is fixed as well; it is not sent to the node factor
        z = lq(1, -L, L)
        assert laurent_substitute(z, 1) == z

    def test_monomial_rule(self):
        # q^d L^k -> q^(2delta-d) L^(k+delta-d)
        assert laurent_substitute(lq(0, L**2), 2) == lq(0, 0, 0, L**3)

    def test_degree_too_large(self):
        with pytest.raises(SubstitutionError):
            laurent_substitute(lq(1, 1, 1), 0)

    def test_negative_exponent(self):
        with pytest.raises(SubstitutionError):
            laurent_substitute(lq(0, 0, 1), 1)

    def test_weight_ring_rejected(self):
        with pytest.raises(RingMismatchError):
            laurent_substitute(QPoly(Ring.WEIGHT, [1]), 0)

    @settings(max_examples=200)
    @given(substitutable())
    def test_involution(self, case):
        z, delta = case
        assert laurent_substitute(laurent_substitute(z, delta), delta) == z


class TestSpecialize:
    def test_euler(self):
        assert specialize(LPoly([1, 2]), EULER) == 3

    def test_weight_monomial(self):
        assert specialize(L**2, WEIGHT) == t**4

    def test_node_factor(self):
        assert specialize(lq(1, -1, L), WEIGHT) == QPoly(Ring.WEIGHT, [1, -1, t**2])
        assert specialize(lq(1, -1, L), EULER) == (1, -1, 1)

    def test_series(self):
        s = specialize(lq(1, L).to_series(2), WEIGHT)
        assert isinstance(s, QSeries) and s.truncation == 2

    def test_unknown_target(self):
        with pytest.raises(ValueError):
            specialize(L, "hodge")

    @given(lpolys(), lpolys())
    def test_homomorphism(self, a, b):
        for target in (EULER, WEIGHT):
            assert specialize(a * b, target) == specialize(a, target) * specialize(b, target)
            assert specialize(a + b, target) == specialize(a, target) + specialize(b, target)


class TestInterpolation:
    def test_linear(self):
        assert interpolate_exact([(2, 3), (3, 4), (5, 6)], 1) == 1 + L

    def test_constant(self):
        assert interpolate_exact([(2, 1), (3, 1), (5, 1)], 2) == LPoly(1)

    def test_surplus_points(self):
        assert interpolate_exact([(2, 5), (3, 7), (5, 11), (7, 15)], 1) == LPoly([1, 2])

    def test_surplus_disagreement(self):
        with pytest.raises(NotPolynomialCountError):
            interpolate_exact([(2, 3), (3, 4), (5, 7)], 1)

    def test_non_integral_fit(self):
        with pytest.raises(NotPolynomialCountError):
            interpolate_exact([(2, 0), (4, 1)], 1)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            interpolate_exact([(2, 1)], 1)

    def test_repeated_point(self):
        with pytest.raises(ValueError):
            interpolate_exact([(2, 1), (2, 1)], 1)

    @settings(max_examples=200)
    @given(
        lpolys(4),
        st.lists(st.integers(2, 60), min_size=7, max_size=7, unique=True),
    )
    def test_round_trip(self, p, points):
        deg = max(p.degree, 0)
        samples = [(x, p(x)) for x in points]
        assert interpolate_exact(samples, deg) == p
        assert interpolate_exact(samples, 5) == p
