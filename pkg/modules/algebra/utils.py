import heapq
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Sequence, Tuple

import mpmath

from shared.response import ArithmeticException
from .models import (
    Monomial, MonomialOrder, MultiPoly, RatInterval,
    monomial_div, monomial_divides, monomial_mul
)

logger = logging.getLogger(__name__)

# A divisor prepared for fraction-free reduction: (terms, leading monomial, positive leading coefficient)
IntDivisor = Tuple[Dict[Monomial, int], Monomial, int]


def rat_normalize(n: int, d: int) -> Fraction:
    """Canonical rational n/d; the sign is carried by the numerator"""
    if d == 0:
        raise ArithmeticException("division by zero")
    return Fraction(n, d)


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check_ambient(q)
    return p * q


def integer_content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def content_primitive(p: MultiPoly) -> Tuple[Fraction, MultiPoly, Monomial]:
    """Split p = content * monomial_gcd * primitive.

    The primitive part has coprime integer coefficients, a positive leading
    coefficient under lex and no monomial factor.
    """
    if p.is_zero():
        raise ArithmeticException("content of the zero polynomial is undefined")
    monomials = list(p.terms)
    mono_gcd = tuple(min(m[i] for m in monomials) for i in range(p.arity))
    denominator = 1
    for c in p.terms.values():
        denominator = lcm(denominator, c.denominator)
    numerators = {m: int(c * denominator) for m, c in p.terms.items()}
    g = integer_content(numerators.values())
    lead = max(numerators, key=MonomialOrder.LEX.key)
    sign = 1 if numerators[lead] > 0 else -1
    content = Fraction(sign * g, denominator)
    primitive = MultiPoly._raw(
        p.variables,
        {monomial_div(m, mono_gcd): Fraction(sign * v // g) for m, v in numerators.items()}
    )
    return content, primitive, mono_gcd


def primitive_part(p: MultiPoly) -> MultiPoly:
    """Integer primitive form keeping monomial factors"""
    if p.is_zero():
        return p
    content, primitive, mono_gcd = content_primitive(p)
    return primitive.mul_term(mono_gcd)


def _push(heap: list, queued: set, order: MonomialOrder, m: Monomial) -> None:
    if m not in queued:
        queued.add(m)
        heapq.heappush(heap, (order.descending_key(m), m))


def normal_form(p: MultiPoly, divisors: Sequence[MultiPoly], order: MonomialOrder) -> MultiPoly:
    """Remainder of multivariate division of p by divisors.

    p - r lies in the ideal of the divisors and no term of r is divisible by
    a divisor's leading monomial.
    """
    prepared = []
    for g in divisors:
        p._check_ambient(g)
        if g.is_zero():
            raise ArithmeticException("division by the zero polynomial")
        lm = g.leading_monomial(order)
        prepared.append((g.terms, lm, g.terms[lm]))

    work: Dict[Monomial, Fraction] = dict(p.terms)
    remainder: Dict[Monomial, Fraction] = {}
    heap: list = []
    queued: set = set()
    for m in work:
        _push(heap, queued, order, m)

    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = work.pop(m, 0)
        if not c:
            continue
        for g_terms, g_lm, g_lc in prepared:
            if monomial_divides(g_lm, m):
                quotient = monomial_div(m, g_lm)
                factor = c / g_lc
                for gm, gc in g_terms.items():
                    if gm == g_lm:
                        continue
                    t = monomial_mul(gm, quotient)
                    value = work.get(t, 0) - factor * gc
                    if value:
                        work[t] = value
                        _push(heap, queued, order, t)
                    else:
                        work.pop(t, None)
                break
        else:
            remainder[m] = c
    return MultiPoly._raw(p.variables, remainder)


def to_int_terms(p: MultiPoly) -> Dict[Monomial, int]:
    """Integer primitive term map with positive lex leading coefficient"""
    content, primitive, mono_gcd = content_primitive(p)
    return {monomial_mul(m, mono_gcd): int(c) for m, c in primitive.terms.items()}


def reduce_primitive(
    terms: Dict[Monomial, int],
    divisors: Sequence[IntDivisor],
    order: MonomialOrder
) -> Tuple[Dict[Monomial, int], int]:
    """Fraction-free full reduction over Z.

    Returns the remainder divided by its content together with the largest
    coefficient bit length seen along the way.
    """
    work = dict(terms)
    remainder: Dict[Monomial, int] = {}
    heap: list = []
    queued: set = set()
    for m in work:
        _push(heap, queued, order, m)
    max_bits = max((abs(v).bit_length() for v in work.values()), default=0)
    scalings = 0

    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = work.pop(m, 0)
        if not c:
            continue
        for g_terms, g_lm, g_lc in divisors:
            if monomial_divides(g_lm, m):
                break
        else:
            remainder[m] = c
            continue
        quotient = monomial_div(m, g_lm)
        d = gcd(c, g_lc)
        multiplier, factor = g_lc // d, c // d
        if multiplier != 1:
            work = {t: v * multiplier for t, v in work.items()}
            remainder = {t: v * multiplier for t, v in remainder.items()}
            scalings += 1
        for gm, gc in g_terms.items():
            if gm == g_lm:
                continue
            t = monomial_mul(gm, quotient)
            value = work.get(t, 0) - factor * gc
            if value:
                work[t] = value
                _push(heap, queued, order, t)
            else:
                work.pop(t, None)
        if multiplier != 1 and scalings % 16 == 0:
            g = integer_content(list(work.values()) + list(remainder.values()))
            bits = max((abs(v).bit_length() for v in work.values()), default=0)
            max_bits = max(max_bits, bits)
            if g > 1:
                work = {t: v // g for t, v in work.items()}
                remainder = {t: v // g for t, v in remainder.items()}

    if remainder:
        g = integer_content(remainder.values())
        remainder = {t: v // g for t, v in remainder.items()}
        max_bits = max(max_bits, max(abs(v).bit_length() for v in remainder.values()))
    return remainder, max_bits


def mpf_enclosure(value: mpmath.mpf, ulps: int = 4) -> RatInterval:
    """Rational interval around an mpmath value, widened by a few units in the last place"""
    man, exp = mpmath.mpf(value).man_exp
    exact = Fraction(int(man)) * (Fraction(2) ** int(exp))
    slack = Fraction(2) ** int(exp) * ulps
    return RatInterval(exact - slack, exact + slack)


def pi_enclosure(bits: int = 256) -> RatInterval:
    with mpmath.workprec(bits):
        return mpf_enclosure(+mpmath.pi)
