"""
Exact rational arithmetic, rational intervals and multivariate polynomials
"""
from .models import (
    Rational, RatInterval, Monomial, MonomialOrder, MultiPoly,
    ambient_variables, parse_polynomial
)
from .utils import (
    rat_normalize, poly_mul, content_primitive, primitive_part, normal_form,
    reduce_primitive, pi_enclosure, mpf_enclosure
)

__all__ = [
    "Rational",
    "RatInterval",
    "Monomial",
    "MonomialOrder",
    "MultiPoly",
    "ambient_variables",
    "parse_polynomial",
    "rat_normalize",
    "poly_mul",
    "content_primitive",
    "primitive_part",
    "normal_form",
    "reduce_primitive",
    "pi_enclosure",
    "mpf_enclosure"
]
