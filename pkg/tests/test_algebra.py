import random
from fractions import Fraction

import mpmath
import pytest

from shared.response import ArithmeticException
from modules.algebra.models import (
    MonomialOrder, MultiPoly, RatInterval, ambient_variables, parse_polynomial
)
from modules.algebra.utils import (
    content_primitive, normal_form, pi_enclosure, poly_mul, rat_normalize
)

V2 = ambient_variables(2)  # (a1, a3, w)
V3 = ambient_variables(3)


def P(text, variables=V2):
    return parse_polynomial(variables, text)


def random_poly(rng, variables, terms=4, degree=3):
    result = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, degree) for _ in variables)
        result[m] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return MultiPoly(variables, result)


# Rationals

@pytest.mark.parametrize("n, d, expected", [
    (6, -4, Fraction(-3, 2)),
    (0, 7, Fraction(0)),
    (324, 218, Fraction(162, 109)),
])
def test_rat_normalize(n, d, expected):
    value = rat_normalize(n, d)
    assert value == expected
    assert value.denominator > 0


def test_rat_normalize_zero_denominator():
    with pytest.raises(ArithmeticException, match="division by zero"):
        rat_normalize(1, 0)


# Intervals

def test_interval_arithmetic_is_outward():
    a = RatInterval(Fraction(1), Fraction(2))
    b = RatInterval(Fraction(-1), Fraction(3))
    assert a + b == RatInterval(Fraction(0), Fraction(5))
    assert a - b == RatInterval(Fraction(-2), Fraction(3))
    assert a * b == RatInterval(Fraction(-2), Fraction(6))
    assert b ** 2 == RatInterval(Fraction(0), Fraction(9))
    assert (-a) ** 3 == RatInterval(Fraction(-8), Fraction(-1))
    assert a / 2 == RatInterval(Fraction(1, 2), Fraction(1))
    assert 1 / a == RatInterval(Fraction(1, 2), Fraction(1))


def test_interval_division_by_zero_interval():
    with pytest.raises(ArithmeticException, match="division by zero"):
        RatInterval(Fraction(1), Fraction(2)) / RatInterval(Fraction(-1), Fraction(1))


def test_empty_interval_rejected():
    with pytest.raises(ArithmeticException):
        RatInterval(Fraction(2), Fraction(1))


def test_interval_predicates():
    a = RatInterval(Fraction(1), Fraction(3))
    assert a.contains(2) and not a.contains(4)
    assert a.overlaps(RatInterval(Fraction(3), Fraction(5)))
    assert not a.overlaps(RatInterval(Fraction(4), Fraction(5)))
    assert a.hull(RatInterval(Fraction(-1), Fraction(0))) == RatInterval(Fraction(-1), Fraction(3))
    assert a.width == 2 and a.midpoint == 2
    assert a.is_positive() and not a.contains_zero()


def test_pi_enclosure():
    enclosure = pi_enclosure(256)
    with mpmath.workdps(100):
        lo = mpmath.mpf(enclosure.lo.numerator) / enclosure.lo.denominator
        hi = mpmath.mpf(enclosure.hi.numerator) / enclosure.hi.denominator
        assert lo < mpmath.pi < hi
    assert enclosure.width < Fraction(1, 10 ** 70)


# Polynomials

def test_poly_mul_examples():
    assert poly_mul(P("a1 + a3"), P("a1 - a3")) == P("a1^2 - a3^2")
    assert poly_mul(P("a1 + a3"), MultiPoly.zero(V2)).is_zero()
    assert poly_mul(P("a1 + 10*a3"), P("a1")) == P("a1^2 + 10*a1*a3")


def test_poly_mul_mismatched_ambient():
    with pytest.raises(ArithmeticException, match="mismatched"):
        poly_mul(P("a1"), parse_polynomial(V3, "a1"))


def test_ring_axioms_on_random_polynomials():
    rng = random.Random(7)
    for _ in range(20):
        p, q, r = (random_poly(rng, V2) for _ in range(3))
        assert (p + q) * r == p * r + q * r
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)


def test_zero_coefficients_are_not_stored():
    p = P("a1 + a3") - P("a3")
    assert p == P("a1")
    assert all(c != 0 for c in p.terms.values())


def test_render_and_parse():
    p = MultiPoly(V2, {(0, 0, 2): 109, (0, 0, 0): -162})
    assert p.render() == "109*w^2 - 162"
    q = P("a1^2*w^2 + 9*a3^2*w^2 - 2")
    assert parse_polynomial(V2, q.render()) == q
    assert P("-1/2*a1*w").render() == "-1/2*a1*w"


def test_evaluate_points_and_boxes():
    p = P("a1^2 - 2*a3 + w")
    assert p.evaluate([Fraction(3), Fraction(1), Fraction(1, 2)]) == Fraction(15, 2)
    box = [RatInterval(Fraction(1), Fraction(2)), RatInterval.point(0), RatInterval.point(0)]
    assert p.evaluate(box) == RatInterval(Fraction(1), Fraction(4))


# Orders

def test_monomial_orders():
    lex, grevlex = MonomialOrder.LEX, MonomialOrder.GREVLEX
    assert lex.compare((1, 0, 0), (0, 5, 5)) == 1
    assert grevlex.compare((1, 0, 0), (0, 5, 5)) == -1
    # grevlex ties on degree break against the last variable
    assert grevlex.compare((1, 0, 1), (0, 2, 0)) == -1
    rng = random.Random(3)
    for order in (lex, grevlex):
        for _ in range(50):
            u, v, w = (tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(3))
            if order.compare(u, v) < 0:
                uw = tuple(a + b for a, b in zip(u, w))
                vw = tuple(a + b for a, b in zip(v, w))
                assert order.compare(uw, vw) < 0
            assert order.compare(u, v) == -order.compare(v, u)
            assert order.compare((0, 0, 0), u) <= 0


# content_primitive

def test_content_primitive_strips_content_and_monomial():
    p = P("-1/2*a1^2*w^2 - 5*a1*a3*w^2")
    content, primitive, mono = content_primitive(p)
    assert primitive == P("a1 + 10*a3")
    assert mono == (1, 0, 2)
    assert content == Fraction(-1, 2)
    assert primitive.mul_term(mono, content) == p


def test_content_primitive_second_harmonic_condition():
    p = parse_polynomial(V3, "-5*a1*a3*w^2 - 13*a1*a5*w^2")
    content, primitive, mono = content_primitive(p)
    assert primitive == parse_polynomial(V3, "5*a3 + 13*a5")
    assert primitive.mul_term(mono, content) == p


def test_content_primitive_monomial():
    content, primitive, mono = content_primitive(P("7*a1"))
    assert (content, primitive, mono) == (7, MultiPoly.constant(V2, 1), (1, 0, 0))


def test_content_primitive_round_trip_random():
    rng = random.Random(11)
    for _ in range(30):
        p = random_poly(rng, V2)
        if p.is_zero():
            continue
        content, primitive, mono = content_primitive(p)
        assert primitive.mul_term(mono, content) == p
        assert all(c.denominator == 1 for c in primitive.terms.values())
        assert primitive.leading_coefficient(MonomialOrder.LEX) > 0


def test_content_primitive_zero():
    with pytest.raises(ArithmeticException):
        content_primitive(MultiPoly.zero(V2))


# normal_form

def test_normal_form_examples():
    divisor = [P("a1 + 10*a3")]
    assert normal_form(P("a1^2 + 10*a1*a3"), divisor, MonomialOrder.LEX).is_zero()
    assert normal_form(P("a1"), [P("a3")], MonomialOrder.LEX) == P("a1")
    assert normal_form(P("a1 + a3 - 1"), divisor, MonomialOrder.LEX) == P("-9*a3 - 1")
