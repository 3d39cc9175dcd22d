from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from shared.response import ArithmeticException
from shared.utils import format_decimal

Rational = Fraction
Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


# Monomials are dense exponent tuples, one slot per ambient variable.

def monomial_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(u, v))


def monomial_div(u: Monomial, v: Monomial) -> Monomial:
    """u / v, assuming v divides u"""
    return tuple(a - b for a, b in zip(u, v))


def monomial_divides(v: Monomial, u: Monomial) -> bool:
    """True when v | u"""
    return all(b <= a for a, b in zip(u, v))


def monomial_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(u, v))


def monomial_gcd(u: Monomial, v: Monomial) -> Monomial:
    return tuple(min(a, b) for a, b in zip(u, v))


class MonomialOrder(str, Enum):
    """Term orders; variable priority is the ambient list order"""
    LEX = "lex"
    GREVLEX = "grevlex"

    def key(self, m: Monomial) -> tuple:
        """Ascending sort key: larger monomials get larger keys"""
        if self is MonomialOrder.LEX:
            return m
        return (sum(m), tuple(-e for e in reversed(m)))

    def descending_key(self, m: Monomial) -> tuple:
        """Key that sorts (and heap-pops) the largest monomial first"""
        if self is MonomialOrder.LEX:
            return tuple(-e for e in m)
        return (-sum(m), tuple(reversed(m)))

    def compare(self, u: Monomial, v: Monomial) -> int:
        ku, kv = self.key(u), self.key(v)
        return (ku > kv) - (ku < kv)


@dataclass(frozen=True)
class RatInterval:
    """Closed interval with exact rational endpoints; all operations are outward-conservative"""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ArithmeticException(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Scalar) -> "RatInterval":
        return cls(Fraction(x), Fraction(x))

    @staticmethod
    def coerce(value: Union["RatInterval", Scalar]) -> "RatInterval":
        if isinstance(value, RatInterval):
            return value
        return RatInterval.point(value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def magnitude(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x: Union["RatInterval", Scalar]) -> bool:
        other = RatInterval.coerce(x)
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def overlaps(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        if isinstance(other, (int, Fraction)):
            return RatInterval(self.lo + other, self.hi + other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, (RatInterval, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other >= 0:
                return RatInterval(self.lo * other, self.hi * other)
            return RatInterval(self.hi * other, self.lo * other)
        if not isinstance(other, RatInterval):
            return NotImplemented
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RatInterval":
        if self.contains_zero():
            raise ArithmeticException("division by zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ArithmeticException("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, RatInterval):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return RatInterval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            return RatInterval(self.lo ** n, self.hi ** n)
        if self.hi <= 0:
            return RatInterval(self.hi ** n, self.lo ** n)
        return RatInterval(Fraction(0), self.magnitude ** n)

    def decimal(self, digits: int) -> str:
        return format_decimal(self.midpoint, digits)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


class MultiPoly:
    """Multivariate polynomial over Q on a fixed ambient variable list.

    Terms map dense exponent tuples to nonzero Fractions; equal polynomials
    have identical term maps.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Dict[Monomial, Scalar]] = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        arity = len(self.variables)
        clean: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in (terms or {}).items():
            monomial = tuple(monomial)
            if len(monomial) != arity or any(e < 0 for e in monomial):
                raise ArithmeticException(f"monomial {monomial} does not fit variables {self.variables}")
            value = clean.get(monomial, 0) + Fraction(coefficient)
            if value:
                clean[monomial] = value
            else:
                clean.pop(monomial, None)
        self.terms: Dict[Monomial, Fraction] = clean

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Monomial, Fraction]) -> "MultiPoly":
        poly = cls.__new__(cls)
        poly.variables = variables
        poly.terms = terms
        return poly

    # Constructors

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Monomial, coefficient: Scalar = 1) -> "MultiPoly":
        return cls(variables, {tuple(exponents): coefficient})

    @classmethod
    def variable(cls, variables: Sequence[str], which: Union[int, str]) -> "MultiPoly":
        variables = tuple(variables)
        index = variables.index(which) if isinstance(which, str) else which
        exponents = tuple(1 if i == index else 0 for i in range(len(variables)))
        return cls._raw(variables, {exponents: Fraction(1)})

    # Inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self.terms), default=-1)

    def variables_used(self) -> Set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def is_univariate_in(self, index: int) -> bool:
        return self.variables_used() <= {index}

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        if not self.terms:
            raise ArithmeticException("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def items(self, order: MonomialOrder = MonomialOrder.LEX) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending order"""
        return sorted(self.terms.items(), key=lambda item: order.descending_key(item[0]))

    def coefficients_in(self, index: int) -> Dict[int, "MultiPoly"]:
        """View as a polynomial in one variable with coefficients in the others"""
        grouped: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            rest = tuple(0 if i == index else e for i, e in enumerate(m))
            grouped.setdefault(m[index], {})[rest] = c
        return {e: MultiPoly._raw(self.variables, t) for e, t in grouped.items()}

    # Arithmetic

    def _check_ambient(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise ArithmeticException(
                f"mismatched ambient variable lists {self.variables} and {other.variables}"
            )

    def _lift(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            self._check_ambient(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.variables, other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            value = terms.get(m, 0) + c
            if value:
                terms[m] = value
            else:
                terms.pop(m, None)
        return MultiPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, factor: Scalar) -> "MultiPoly":
        factor = Fraction(factor)
        if not factor:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(self.variables, {m: c * factor for m, c in self.terms.items()})

    def mul_term(self, monomial: Monomial, coefficient: Scalar = 1) -> "MultiPoly":
        coefficient = Fraction(coefficient)
        if not coefficient:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(
            self.variables,
            {monomial_mul(m, monomial): c * coefficient for m, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_ambient(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultiPoly._raw(self.variables, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # Evaluation

    def evaluate(self, values: Sequence[Any]) -> Any:
        """Evaluate at a point; works for Fractions, floats, mpf and RatInterval boxes"""
        if len(values) != self.arity:
            raise ArithmeticException(f"expected {self.arity} values, got {len(values)}")
        powers: Dict[Tuple[int, int], Any] = {}
        total: Any = 0
        for m, c in self.terms.items():
            term: Any = None
            for i, e in enumerate(m):
                if not e:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = values[i] ** e
                term = powers[key] if term is None else term * powers[key]
            if term is None:
                total = total + c
            elif isinstance(term, float):
                total = total + float(c) * term
            else:
                total = total + c * term
        return total

    # Rendering

    def _monomial_text(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.variables, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render(self) -> str:
        """Terms in descending lex order, e.g. `109*w^2 - 162`"""
        if not self.terms:
            return "0"
        pieces = []
        for index, (m, c) in enumerate(self.items(MonomialOrder.LEX)):
            body = self._monomial_text(m)
            magnitude = abs(c)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if index == 0:
                pieces.append(f"-{text}" if c < 0 else text)
            else:
                pieces.append(f" - {text}" if c < 0 else f" + {text}")
        return "".join(pieces)

    def to_json(self) -> List[Dict[str, Any]]:
        return [
            {"exponents": list(m), "coefficient": str(c)}
            for m, c in self.items(MonomialOrder.LEX)
        ]

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"


def ambient_variables(order: int) -> Tuple[str, ...]:
    """(a1, a3, ..., a_{2N-1}, w) for an HBM ansatz of the given order"""
    return tuple(f"a{2 * j - 1}" for j in range(1, order + 1)) + ("w",)


def parse_polynomial(variables: Sequence[str], text: str) -> MultiPoly:
    """Parse the rendering format back (sums of `coef*x^e*y` terms)"""
    variables = tuple(variables)
    compact = text.replace(" ", "")
    if not compact:
        raise ArithmeticException("empty polynomial text")
    compact = compact.replace("-", "+-")
    terms: Dict[Monomial, Fraction] = {}
    for chunk in compact.split("+"):
        if not chunk:
            continue
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        coefficient = Fraction(sign)
        exponents = [0] * len(variables)
        for factor in chunk.split("*"):
            name, _, power = factor.partition("^")
            if name in variables:
                exponents[variables.index(name)] += int(power or 1)
            else:
                coefficient *= Fraction(factor)
        m = tuple(exponents)
        terms[m] = terms.get(m, 0) + coefficient
    return MultiPoly(variables, terms)
