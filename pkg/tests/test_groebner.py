from fractions import Fraction

import pytest
import sympy

from shared.response import (
    ArithmeticException, BudgetExhaustedException, NotZeroDimensionalException
)
from modules.algebra.models import MonomialOrder, MultiPoly, ambient_variables, parse_polynomial
from modules.algebra.utils import normal_form
from modules.groebner.manager import groebner_manager
from modules.groebner.models import GroebnerBudget
from modules.realroots.models import UniPoly
from modules.trigring.manager import trigring_manager
from tests.conftest import proportional, scaled_match

LEX = MonomialOrder.LEX
V2 = ambient_variables(2)


def P(text, variables=V2):
    return parse_polynomial(variables, text)


def hbm_equations(m, order):
    return list(trigring_manager.build_hbm_system(m, order).equations)


def hbm_generators(m, order):
    return list(trigring_manager.build_hbm_system(m, order).ideal_generators)


def sympy_basis(polys, variables, order="lex"):
    """Reference basis computed by sympy, as MultiPoly objects"""
    symbols = sympy.symbols(" ".join(variables))
    exprs = [sympy.sympify(p.render().replace("^", "**")) for p in polys]
    basis = sympy.groebner(exprs, *symbols, order=order)
    result = []
    for expr in basis.exprs:
        poly = sympy.Poly(expr, *symbols)
        result.append(MultiPoly(variables, {m: Fraction(str(c)) for m, c in poly.terms()}))
    return result


def test_basis_order_zero_two():
    basis = groebner_manager.buchberger(hbm_equations(0, 2), LEX)
    assert basis.generators == (P("109*w^2 - 162"), P("9*a3 + 1"), P("9*a1 - 10"))
    assert basis.render_text().splitlines() == ["109*w^2 - 162", "9*a3 + 1", "9*a1 - 10"]


def test_basis_of_a_basis_is_itself():
    basis = groebner_manager.buchberger([P("a1 - 1")], LEX)
    assert basis.generators == (P("a1 - 1"),)


def test_unit_ideal():
    basis = groebner_manager.buchberger([P("a1"), P("a1 - 1")], LEX)
    assert basis.generators == (MultiPoly.constant(V2, 1),)


def test_s_polynomial():
    assert groebner_manager.s_polynomial(P("a1^2"), P("a1*a3"), LEX).is_zero()
    f = P("a1 + 10*a3")
    assert groebner_manager.s_polynomial(f, f, LEX).is_zero()
    assert groebner_manager.s_polynomial(f, P("a1 + a3 - 1"), LEX) == P("9*a3 + 1")


@pytest.mark.parametrize("source", [hbm_equations, hbm_generators])
@pytest.mark.parametrize("m, order", [(0, 1), (0, 2), (1, 1), (1, 2)])
def test_basis_properties(source, m, order):
    gens = source(m, order)
    basis = groebner_manager.buchberger(gens, LEX)
    assert groebner_manager.is_groebner(basis)
    for g in gens:
        assert normal_form(g, basis.generators, LEX).is_zero()
    lms = basis.leading_monomials()
    for i, g in enumerate(basis.generators):
        assert g.leading_coefficient(LEX) > 0
        assert all(c.denominator == 1 for c in g.terms.values())
        others = lms[:i] + lms[i + 1:]
        for m_term in g.terms:
            assert not any(all(a <= b for a, b in zip(lm, m_term)) for lm in others)


@pytest.mark.parametrize("source", [hbm_equations, hbm_generators])
@pytest.mark.parametrize("m, order", [(0, 2), (1, 2)])
def test_basis_matches_sympy(source, m, order):
    gens = source(m, order)
    basis = groebner_manager.buchberger(gens, LEX)
    reference = sympy_basis(gens, basis.variables)
    assert len(reference) == len(basis.generators)
    by_leader = {g.leading_monomial(LEX): g for g in basis.generators}
    for r in reference:
        assert proportional(by_leader[r.leading_monomial(LEX)], r)


def test_basis_is_deterministic():
    gens = hbm_equations(1, 2)
    first = groebner_manager.buchberger(gens, LEX)
    second = groebner_manager.buchberger(list(reversed(gens)), LEX)
    assert first.generators == second.generators


def test_univariate_order_one_two():
    basis = groebner_manager.buchberger(hbm_generators(1, 2), LEX)
    univariate = groebner_manager.eliminate_univariate(basis)
    expected = {8: 7635411, 6: -14625556, 4: 5833600, 2: -661376, 0: 13824}
    assert scaled_match(univariate, len(V2) - 1, expected)


def test_univariate_order_zero_three():
    basis = groebner_manager.compute_basis(hbm_generators(0, 3), LEX, strategy="fglm")
    univariate = groebner_manager.eliminate_univariate(basis)
    index = len(basis.variables) - 1
    expected = {8: 1553685075, 6: -3692301106, 4: 2143547654, 2: -402413472, 0: 20301192}
    assert scaled_match(univariate, index, expected)
    # only even powers of w survive
    assert all(m[index] % 2 == 0 for m in univariate.terms)
    # a1 = 0 with (a3, a5) = (1, 0) or (0, 1)
    in_w = UniPoly.from_multipoly(univariate, index)
    for factor in (UniPoly([-2, 0, 9]), UniPoly([-2, 0, 25])):
        assert (in_w % factor).is_zero()


def test_stripped_equations_lose_the_a1_zero_factor():
    """Eliminating the printed equations drops the 27w^2 - 4 factor of the a1 = 0 branch"""
    stripped = groebner_manager.eliminate_univariate(groebner_manager.buchberger(hbm_equations(1, 2), LEX))
    full = groebner_manager.eliminate_univariate(groebner_manager.buchberger(hbm_generators(1, 2), LEX))
    in_w = [UniPoly.from_multipoly(p, len(V2) - 1) for p in (stripped, full)]
    assert in_w[0].degree == 6 and in_w[1].degree == 8
    assert (in_w[0] * UniPoly([-4, 0, 27])).primitive() == in_w[1].primitive()


def test_ideal_generators_keep_monomial_factors():
    system = trigring_manager.build_hbm_system(0, 2)
    assert system.ideal_generators[1] == P("a1^2 + 10*a1*a3")
    assert system.ideal_generators[0] == system.equations[0]
    assert system.ideal_generators[-1] == system.normalization
    three = trigring_manager.build_hbm_system(0, 3)
    V3 = ambient_variables(3)
    assert three.ideal_generators[2] == parse_polynomial(V3, "5*a1*a3 + 13*a1*a5")
    assert three.equations[2] == parse_polynomial(V3, "5*a3 + 13*a5")
    # no generator keeps a power of w as a factor
    for g in three.ideal_generators:
        assert min(m[-1] for m in g.terms) == 0


def test_fglm_agrees_with_direct():
    for m, order in [(0, 2), (1, 2)]:
        gens = hbm_equations(m, order)
        direct = groebner_manager.compute_basis(gens, LEX, strategy="direct")
        converted = groebner_manager.compute_basis(gens, LEX, strategy="fglm")
        assert converted.generators == direct.generators
        assert converted.stats.strategy == "fglm"


def test_unknown_strategy():
    with pytest.raises(ArithmeticException):
        groebner_manager.compute_basis([P("a1 - 1")], LEX, strategy="magic")


def test_minimal_polynomial():
    basis = groebner_manager.buchberger(hbm_equations(0, 2), LEX)
    assert groebner_manager.minimal_polynomial(basis, 0) == P("9*a1 - 10")
    assert groebner_manager.minimal_polynomial(basis, 2) == P("109*w^2 - 162")


def test_not_zero_dimensional():
    basis = groebner_manager.buchberger([P("a1 - a3")], LEX)
    with pytest.raises(NotZeroDimensionalException):
        groebner_manager.eliminate_univariate(basis)


def test_budget_exhaustion_reports_stats():
    budget = GroebnerBudget(max_spairs=1, max_coefficient_bits=10 ** 9)
    with pytest.raises(BudgetExhaustedException) as info:
        groebner_manager.buchberger(hbm_equations(0, 3), LEX, budget)
    assert info.value.stats["spairs_processed"] == 2
    assert info.value.exit_code == 3


def test_coefficient_budget_exhaustion():
    budget = GroebnerBudget(max_spairs=10 ** 6, max_coefficient_bits=8)
    with pytest.raises(BudgetExhaustedException, match="coefficient budget"):
        groebner_manager.buchberger(hbm_equations(0, 3), LEX, budget)
