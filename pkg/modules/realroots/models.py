from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Dict, List, Sequence, Tuple, Union

from shared.response import ArithmeticException
from shared.utils import format_decimal
from modules.algebra.models import MultiPoly, RatInterval


class UniPoly:
    """Univariate polynomial over Q, coefficients in ascending degree"""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence[Union[int, Fraction]]):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coefficients: Tuple[Fraction, ...] = tuple(coeffs)

    @classmethod
    def from_multipoly(cls, p: MultiPoly, index: int) -> "UniPoly":
        if not p.is_univariate_in(index):
            raise ArithmeticException(f"{p.render()} is not univariate in {p.variables[index]}")
        degree = max(p.degree_in(index), 0)
        coeffs = [Fraction(0)] * (degree + 1)
        for m, c in p.terms.items():
            coeffs[m[index]] += c
        return cls(coeffs)

    def to_multipoly(self, variables: Sequence[str], index: int) -> MultiPoly:
        arity = len(variables)
        return MultiPoly(variables, {
            tuple(k if i == index else 0 for i in range(arity)): c
            for k, c in enumerate(self.coefficients) if c
        })

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coefficients:
            raise ArithmeticException("zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __call__(self, x: Any) -> Any:
        """Horner evaluation; exact for Fractions, conservative for RatInterval"""
        result: Any = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * x + c
        return result

    def sign_at(self, x: Fraction) -> int:
        value = self(x)
        return (value > 0) - (value < 0)

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coefficients)][1:])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coefficients])

    def __add__(self, other: "UniPoly") -> "UniPoly":
        size = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [Fraction(0)] * (size - len(self.coefficients))
        b = list(other.coefficients) + [Fraction(0)] * (size - len(other.coefficients))
        return UniPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if not self.coefficients or not other.coefficients:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return UniPoly(out)

    def scale(self, factor: Union[int, Fraction]) -> "UniPoly":
        return UniPoly([c * factor for c in self.coefficients])

    def divmod(self, divisor: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        if divisor.is_zero():
            raise ArithmeticException("division by zero")
        remainder = list(self.coefficients)
        quotient = [Fraction(0)] * max(len(remainder) - divisor.degree, 1)
        lead = divisor.leading
        while len(remainder) - 1 >= divisor.degree and remainder:
            shift = len(remainder) - 1 - divisor.degree
            factor = remainder[-1] / lead
            quotient[shift] = factor
            for k, c in enumerate(divisor.coefficients):
                remainder[shift + k] -= factor * c
            remainder.pop()
            while remainder and not remainder[-1]:
                remainder.pop()
        return UniPoly(quotient), UniPoly(remainder)

    def __mod__(self, divisor: "UniPoly") -> "UniPoly":
        return self.divmod(divisor)[1]

    def positive_content_part(self) -> "UniPoly":
        """Integer coprime coefficients, sign preserved"""
        if not self.coefficients:
            return self
        denominator = 1
        for c in self.coefficients:
            denominator = lcm(denominator, c.denominator)
        ints = [int(c * denominator) for c in self.coefficients]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return UniPoly([v // g for v in ints])

    def primitive(self) -> "UniPoly":
        """Integer coprime coefficients with positive leading coefficient"""
        part = self.positive_content_part()
        return -part if part.coefficients and part.leading < 0 else part

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self.primitive(), other.primitive()
        while not b.is_zero():
            a, b = b, (a % b).primitive()
        return a.primitive()

    def square_free(self) -> "UniPoly":
        """p / gcd(p, p'); p itself when already square-free"""
        if self.degree < 1:
            return self
        g = self.gcd(self.derivative())
        if g.degree < 1:
            return self
        return self.divmod(g)[0]

    def reflect(self) -> "UniPoly":
        """p(-t)"""
        return UniPoly([c if k % 2 == 0 else -c for k, c in enumerate(self.coefficients)])

    def render(self, variable: str = "t") -> str:
        if not self.coefficients:
            return "0"
        names = ("w",) if variable == "w" else (variable,)
        return self.to_multipoly(names, 0).render()

    def __repr__(self) -> str:
        return f"UniPoly({self.render()!r})"


@dataclass(frozen=True)
class RootEnclosure:
    """Certified isolating interval for one real root (Sturm count 1)"""
    interval: RatInterval
    sign_left: int
    sign_right: int
    exact: bool = False
    sturm_count: int = 1

    @property
    def width(self) -> Fraction:
        return self.interval.width

    @property
    def midpoint(self) -> Fraction:
        return self.interval.midpoint

    def decimal(self, digits: int) -> str:
        return format_decimal(self.midpoint, digits)

    def to_dict(self, digits: int) -> Dict[str, Any]:
        return {
            "interval": [str(self.interval.lo), str(self.interval.hi)],
            "decimal": self.decimal(digits),
            "exact": self.exact
        }


@dataclass(frozen=True)
class SolutionEnclosure:
    """Box enclosing one real solution of a triangular system"""
    omega: RootEnclosure
    coefficients: Tuple[RatInterval, ...]
    variables: Tuple[str, ...] = ()

    def box(self) -> List[RatInterval]:
        return list(self.coefficients) + [self.omega.interval]

    def coefficient_sum(self) -> RatInterval:
        total = RatInterval.point(0)
        for value in self.coefficients:
            total = total + value
        return total
