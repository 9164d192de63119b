from math import comb, lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbzeta.jacstrata import (
    HilbertFn,
    NoDecompositionError,
    StrataDecomp,
    assemble,
    check_zh_duality,
    dual,
    enumerate_admissible,
    phi_sets,
    solve_strata,
    z_h,
)
from hilbzeta.ringkit import LPoly, QPoly, Ring
from hilbzeta.zeta import BUILTIN_GERMS

L = LPoly.gen()
LEF = Ring.LEFSCHETZ


def lq(*cs):
    return QPoly(LEF, cs)


def projective_class(n):
    return LPoly([1] * (n + 1)) if n >= 0 else LPoly()


def zh_from_fibres(h, truncation):
    """(1 - q)(1 - qL) * sum_d q^d [P^(h(d)-1)], expanded directly."""
    fibres = QPoly(LEF, [projective_class(h(d) - 1) for d in range(truncation + 1)]).to_series(truncation)
    den = (lq(1, -1) * lq(1, -L)).to_series(truncation)
    return (fibres * den).to_qpoly()


@st.composite
def admissible(draw, max_g=4):
    g = draw(st.integers(0, max_g))
    return draw(st.sampled_from(enumerate_admissible(g)))


class TestEnumeration:
    @pytest.mark.parametrize("g", range(6))
    def test_counts(self, g):
        assert len(enumerate_admissible(g)) == comb(2 * g, g)

    def test_genus_two(self):
        vals = [h.values for h in enumerate_admissible(2)]
        assert vals == [(0, 0, 1), (0, 1, 1), (0, 1, 2), (1, 1, 1), (1, 1, 2), (1, 2, 2)]

    def test_genus_zero(self):
        assert enumerate_admissible(0) == [HilbertFn(0)]

    def test_tails(self):
        h = HilbertFn(2, (0, 1, 1))
        assert [h(d) for d in range(-2, 6)] == [0, 0, 0, 1, 1, 2, 3, 4]

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            HilbertFn(2, (0, 1))

    def test_inadmissible(self):
        assert not HilbertFn(2, (0, 2, 2)).is_admissible()
        assert not HilbertFn(1, (2,)).is_admissible()


class TestPhiAndZh:
    def test_phi_examples(self):
        assert phi_sets(HilbertFn(1, (1,))) == ({0, 2}, {1})
        assert phi_sets(HilbertFn(1, (0,))) == ({1}, set())
        assert phi_sets(HilbertFn(0)) == ({0}, set())

    def test_zh_examples(self):
        assert z_h(HilbertFn(1, (1,))) == lq(1, -L, L)
        assert z_h(HilbertFn(1, (0,))) == lq(0, 1)
        assert z_h(HilbertFn(0)) == lq(1)

    @given(admissible())
    def test_phi_bounds(self, h):
        minus, plus = phi_sets(h)
        assert len(minus) == len(plus) + 1
        assert all(0 <= d <= 2 * h.g for d in minus | plus)
        assert not minus & plus

    @pytest.mark.parametrize("g", range(5))
    def test_zh_matches_fibre_expansion(self, g):
        for h in enumerate_admissible(g):
            assert z_h(h) == zh_from_fibres(h, 2 * g + 4)

    @pytest.mark.parametrize("g", [0, 1])
    def test_zh_independent_in_low_genus(self, g):
        sol = solve_strata(lq(1) if g == 0 else z_h(enumerate_admissible(g)[0]), g, bound=0)
        assert sol.unique

    def test_zh_dependent_in_genus_two(self):
        sol = solve_strata(z_h(enumerate_admissible(2)[0]), 2, bound=0)
        assert not sol.unique


class TestDuality:
    def test_examples(self):
        assert dual(HilbertFn(1, (1,))) == HilbertFn(1, (1,))
        assert dual(HilbertFn(1, (0,))) == HilbertFn(1, (0,))
        assert dual(HilbertFn(2, (0, 1, 1))) == HilbertFn(2, (0, 1, 1))
        assert dual(HilbertFn(2, (0, 1, 2))) == HilbertFn(2, (1, 1, 1))

    def test_malformed(self):
        with pytest.raises(ValueError):
            dual(HilbertFn(2, (0, 3, 1)))

    @pytest.mark.parametrize("g", range(5))
    def test_exhaustive(self, g):
        for h in enumerate_admissible(g):
            assert dual(dual(h)) == h
            assert check_zh_duality(h)

    def test_failure_reported(self):
        v = check_zh_duality(HilbertFn(2, (0, 3, 1)))
        assert not v and v.message


class TestAssembly:
    def test_node(self):
        d = StrataDecomp(1, [(HilbertFn(1, (1,)), LPoly(1)), (HilbertFn(1, (0,)), L - 1)])
        assert assemble(d) == BUILTIN_GERMS["node"].local_factor

    def test_cusp(self):
        d = StrataDecomp(1, [(HilbertFn(1, (1,)), LPoly(1)), (HilbertFn(1, (0,)), L)])
        assert assemble(d) == BUILTIN_GERMS["cusp"].local_factor
        assert d.total_class() == 1 + L

    def test_empty(self):
        assert assemble(StrataDecomp(1)) == QPoly(LEF)

    def test_duplicate_rejected(self):
        h = HilbertFn(1, (1,))
        with pytest.raises(ValueError):
            StrataDecomp(1, [(h, LPoly(1)), (h, L)])

    def test_genus_mismatch(self):
        with pytest.raises(ValueError):
            StrataDecomp(2, [(HilbertFn(1, (1,)), LPoly(1))])


class TestSolve:
    def test_node(self):
        sol = solve_strata(BUILTIN_GERMS["node"].local_factor, 1)
        assert sol.unique
        d = sol.particular_decomp()
        assert d.as_dict() == {HilbertFn(1, (0,)): L - 1, HilbertFn(1, (1,)): LPoly(1)}
        assert d.total_class() == L

    def test_cusp(self):
        sol = solve_strata(BUILTIN_GERMS["cusp"].local_factor, 1)
        assert sol.unique
        d = sol.particular_decomp()
        assert d.as_dict() == {HilbertFn(1, (0,)): L, HilbertFn(1, (1,)): LPoly(1)}
        assert d.total_class() == 1 + L

    def test_out_of_span(self):
        with pytest.raises(NoDecompositionError):
            solve_strata(lq(0, 0, 0, 1), 1)

    def test_inconsistent(self):
        with pytest.raises(NoDecompositionError):
            solve_strata(lq(0, 0, 1), 1)

    def test_tacnode_kernel_assembles_to_zero(self):
        z = BUILTIN_GERMS["tacnode"].local_factor
        sol = solve_strata(z, 2)
        assert not sol.unique
        assert assemble(sol.particular_decomp()) == z
        for vec in sol.kernel:
            scale = lcm(*(x.denominator for x in vec))
            entries = [
                (h, LPoly([int(c * scale) for c in cs])) for h, cs in sol._classes(vec).items()
            ]
            assert not assemble(StrataDecomp(2, entries))
        assert len(sol.kernel_classes()) == len(sol.kernel)

    @given(st.dictionaries(st.sampled_from(enumerate_admissible(2)), st.lists(st.integers(-3, 3), max_size=3).map(LPoly)))
    def test_solve_recovers_assembly(self, classes):
        z = assemble(StrataDecomp(2, list(classes.items())))
        sol = solve_strata(z, 2)
        assert assemble(sol.particular_decomp()) == z
