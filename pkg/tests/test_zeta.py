from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbzeta.ringkit import EULER, WEIGHT, LPoly, QPoly, QSeries, Ring, WPoly, series_invert_unit, specialize
from hilbzeta.zeta import (
    BUILTIN_GERMS,
    SMOOTH_POINT,
    CurveSpec,
    GermSpec,
    NeedsOracleError,
    RationalZeta,
    builtin_germ,
    check_functional_equation,
    curve_series,
    local_factor,
    nodal_weight_series,
    numerator,
    rational_zeta,
    smooth_series,
    weight_crosscheck,
)

L = LPoly.gen()
t = WPoly.gen()
LEF = Ring.LEFSCHETZ
NODE, CUSP = BUILTIN_GERMS["node"], BUILTIN_GERMS["cusp"]


def lq(*cs):
    return QPoly(LEF, cs)


def ls(*cs):
    return QSeries(LEF, len(cs) - 1, cs)


def ws(*cs):
    return QSeries(Ring.WEIGHT, len(cs) - 1, cs)


class TestFunctionalEquation:
    def test_node(self):
        assert check_functional_equation(lq(1, -1, L), 1)

    def test_trivial(self):
        assert check_functional_equation(lq(1), 0)

    def test_fails_at_q2(self):
        v = check_functional_equation(lq(1, -1), 1)
        assert not v
        assert v.data["first_offending"] == 2
        assert "q^2" in v.message

    def test_degree_exceeds(self):
        v = check_functional_equation(lq(1, 0, 0, L), 1)
        assert not v and v.data["first_offending"] == 3

    def test_negative_power(self):
        assert not check_functional_equation(lq(1, 0, 1), 1)

    @pytest.mark.parametrize("label", sorted(BUILTIN_GERMS))
    def test_builtins(self, label):
        g = BUILTIN_GERMS[label]
        assert g.local_factor.degree == 2 * g.cogenus
        assert check_functional_equation(g.local_factor, g.cogenus)

    @settings(max_examples=60)
    @given(st.lists(st.sampled_from(sorted(BUILTIN_GERMS)), max_size=4))
    def test_products(self, labels):
        curve = CurveSpec(0, [BUILTIN_GERMS[x] for x in labels])
        z = numerator(curve)
        assert z.degree == 2 * curve.cogenus
        assert check_functional_equation(z, curve.cogenus)

    @given(st.lists(st.sampled_from(sorted(BUILTIN_GERMS)), min_size=1, max_size=3))
    def test_perturbation_detected(self, labels):
        curve = CurveSpec(0, [BUILTIN_GERMS[x] for x in labels])
        z = numerator(curve) + lq(L)
        assert not check_functional_equation(z, curve.cogenus)


class TestGermSpec:
    def test_wrong_degree(self):
        with pytest.raises(ValueError, match="q-degree"):
            GermSpec("bad", 1, 2, local_factor=lq(1, 0, L))

    def test_constant_term(self):
        with pytest.raises(ValueError, match="constant term"):
            GermSpec("bad", 1, 1, local_factor=lq(2, 0, 2 * L))

    def test_functional_equation_enforced(self):
        with pytest.raises(ValueError):
            GermSpec("bad", 1, 1, local_factor=lq(1, 1, 2 * L))

    def test_smooth_point_has_one_branch(self):
        with pytest.raises(ValueError):
            GermSpec("bad", 2, 0)

    def test_builtin_lookup(self):
        assert builtin_germ("node") is NODE
        with pytest.raises(NeedsOracleError):
            builtin_germ("e8")


class TestLocalFactor:
    def test_node(self):
        assert local_factor(NODE) == lq(1, -1, L)

    def test_smooth(self):
        assert local_factor(SMOOTH_POINT) == lq(1)

    def test_cusp(self):
        assert local_factor(CUSP) == lq(1, 0, L)

    def test_needs_oracle(self):
        with pytest.raises(NeedsOracleError):
            local_factor(GermSpec("e6", 1, 3))
        with pytest.raises(NeedsOracleError):
            local_factor(GermSpec("e6", 1, 3, "y^3 - x^4"))

    def test_oracle_backed(self):
        g = GermSpec("c", 1, 1, "y^2 - x^3")
        assert local_factor(g, primes=(2, 3, 5)) == lq(1, 0, L)

    @pytest.mark.parametrize(
        "label,a,b", [("cusp", 2, 3), ("ramphoid", 3, 4)]
    )
    def test_unibranch_euler_is_rational_catalan(self, label, a, b):
        # Euler value at q = L = 1 of y^a = x^b with gcd(a, b) = 1
        z = local_factor(BUILTIN_GERMS[label])
        assert sum(specialize(z, EULER)) == comb(a + b, a) // (a + b)

    @pytest.mark.parametrize("label", sorted(BUILTIN_GERMS))
    def test_punctual_classes_nonnegative(self, label):
        g = BUILTIN_GERMS[label]
        s = g.local_factor.to_series(10)
        for _ in range(g.branches):
            s = s * series_invert_unit(lq(1, -1).to_series(10))
        assert all(c >= 0 for cls in s.coeffs for c in cls.coeffs)


class TestSeries:
    def test_smooth_rational(self):
        assert smooth_series(0, LEF, 3) == ls(1, 1 + L, 1 + L + L**2, 1 + L + L**2 + L**3)

    def test_smooth_elliptic_weight(self):
        expected = ws(1, 1 + 2 * t + t**2, WPoly([1, 2, 2, 2, 1]))
        assert smooth_series(1, Ring.WEIGHT, 2) == expected

    def test_smooth_weight_r0(self):
        assert smooth_series(0, Ring.WEIGHT, 1) == ws(1, 1 + t**2)

    def test_smooth_positive_genus_not_lefschetz(self):
        with pytest.raises(ValueError):
            smooth_series(1, LEF, 3)

    def test_one_node(self):
        # Hilb^1 is the curve itself, of class [P^1] - 1 = L
        s = curve_series(CurveSpec(0, [NODE]), LEF, 3)
        assert s == ls(1, L, L + L**2, L + L**2 + L**3)

    def test_one_node_from_open_part(self):
        # (C - p) is G_m, whose symmetric powers sum to (1 - q)/(1 - qL), times punctual classes
        punct = ls(1, 1, 1 + L, 1 + 2 * L, 1 + 3 * L, 1 + 4 * L)
        open_part = lq(1, -1).to_series(5) * series_invert_unit(lq(1, -L).to_series(5))
        assert curve_series(CurveSpec(0, [NODE]), LEF, 5) == open_part * punct

    def test_no_germs(self):
        assert curve_series(CurveSpec(0), LEF, 6) == smooth_series(0, LEF, 6)

    def test_one_cusp(self):
        s = curve_series(CurveSpec(0, [CUSP]), LEF, 2)
        assert s.coefficient(2) == 1 + 2 * L + L**2

    def test_numerators(self):
        assert numerator(CurveSpec(0, [NODE, NODE])) == lq(1, -1, L) ** 2
        assert numerator(CurveSpec(0)) == lq(1)
        assert numerator(CurveSpec(0, [NODE, CUSP])) == lq(1, -1, L) * lq(1, 0, L)

    def test_arithmetic_genus(self):
        c = CurveSpec(2, [NODE, BUILTIN_GERMS["ramphoid"]])
        assert (c.cogenus, c.arithmetic_genus) == (4, 6)


class TestRationalZeta:
    def test_round_trip(self):
        rz = rational_zeta(CurveSpec(0, [NODE, CUSP]))
        assert RationalZeta.from_series(rz.expand(8), 4) == rz

    def test_not_rational(self):
        with pytest.raises(ValueError):
            RationalZeta.from_series(ls(1, 1, 1, 0, 0, 0), 1)

    def test_lefschetz_needs_rational_normalization(self):
        with pytest.raises(ValueError):
            rational_zeta(CurveSpec(1, [NODE]))

    def test_weight_form(self):
        rz = rational_zeta(CurveSpec(1, [NODE]), Ring.WEIGHT)
        assert rz.expand(6) == curve_series(CurveSpec(1, [NODE]), Ring.WEIGHT, 6)
        assert rz.denominator_str() == "(1 - q)*(1 - q*t^2)"

    def test_json(self):
        js = rational_zeta(CurveSpec(0, [NODE])).to_json()
        assert js["numerator"] == "1 - q + q^2*L"
        assert js["numerator_terms"] == [[0, [1]], [1, [-1]], [2, [0, 1]]]
        assert js["degree"] == 2


class TestNodalWeights:
    def test_smooth_rational(self):
        assert nodal_weight_series(0, 0, 2) == ws(1, 1 + t**2, 1 + t**2 + t**4)

    def test_one_node_q1(self):
        assert nodal_weight_series(1, 0, 1).coefficient(1) == t**2

    def test_one_node_matches_specialization(self):
        lef = curve_series(CurveSpec(0, [NODE]), LEF, 8)
        assert nodal_weight_series(1, 0, 8) == specialize(lef, WEIGHT)

    @pytest.mark.parametrize("delta,r,n", [(0, 0, 6), (1, 1, 6), (3, 2, 8)])
    def test_crosscheck(self, delta, r, n):
        assert weight_crosscheck(delta, r, n)

    def test_euler_specialization(self):
        # t = -1 turns weight polynomials into Euler numbers
        closed = nodal_weight_series(2, 1, 6)
        lef_r0 = curve_series(CurveSpec(0, [NODE, NODE]), LEF, 6)
        ell = QPoly(Ring.WEIGHT, [1, t]) ** 2
        with_r = specialize(lef_r0, WEIGHT) * ell.to_series(6)
        assert [c(-1) for c in closed.coeffs] == [c(-1) for c in with_r.coeffs]
