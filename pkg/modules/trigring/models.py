from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from shared.response import ArithmeticException
from modules.algebra.models import MultiPoly


class TrigPoly:
    """Finite cosine series sum_j c_j(a, w) cos(j w t) with polynomial coefficients.

    Harmonic 0 is the constant term. Zero coefficients are never stored.
    """

    __slots__ = ("variables", "harmonics")

    def __init__(self, variables: Sequence[str], harmonics: Dict[int, MultiPoly] = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        cleaned: Dict[int, MultiPoly] = {}
        for j, c in (harmonics or {}).items():
            if j < 0:
                raise ArithmeticException(f"negative harmonic index {j}")
            if c.variables != self.variables:
                raise ArithmeticException("ambient variable mismatch")
            if not c.is_zero():
                cleaned[j] = c
        self.harmonics: Dict[int, MultiPoly] = dict(sorted(cleaned.items()))

    @classmethod
    def constant(cls, variables: Sequence[str], value: Union[int, Fraction] = 1) -> "TrigPoly":
        return cls(variables, {0: MultiPoly.constant(variables, value)})

    def is_zero(self) -> bool:
        return not self.harmonics

    @property
    def max_harmonic(self) -> int:
        return max(self.harmonics, default=0)

    def coefficient(self, j: int) -> MultiPoly:
        return self.harmonics.get(j, MultiPoly.zero(self.variables))

    def __iter__(self) -> Iterator[Tuple[int, MultiPoly]]:
        return iter(self.harmonics.items())

    def __len__(self) -> int:
        return len(self.harmonics)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TrigPoly) and self.variables == other.variables
                and self.harmonics == other.harmonics)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        merged = dict(self.harmonics)
        for j, c in other.harmonics.items():
            merged[j] = merged[j] + c if j in merged else c
        return TrigPoly(self.variables, merged)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.variables, {j: -c for j, c in self.harmonics.items()})

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def scale(self, factor: Union[int, Fraction, MultiPoly]) -> "TrigPoly":
        if isinstance(factor, MultiPoly):
            return TrigPoly(self.variables, {j: c * factor for j, c in self.harmonics.items()})
        return TrigPoly(self.variables, {j: c.scale(factor) for j, c in self.harmonics.items()})

    def evaluate(self, values: Sequence[float], t: Any) -> Any:
        """Numeric value at coefficients (a..., w) and time(s) t; w is the last value"""
        point = [float(v) for v in values]
        omega = point[-1]
        times = np.asarray(t, dtype=float)
        total = np.zeros_like(times)
        for j, c in self.harmonics.items():
            total = total + float(c.evaluate(point)) * np.cos(j * omega * times)
        return total if total.ndim else float(total)

    def render(self) -> str:
        if not self.harmonics:
            return "0"
        return " + ".join(
            f"({c.render()})" if j == 0 else f"({c.render()})*cos({j}wt)"
            for j, c in self.harmonics.items()
        )

    def __repr__(self) -> str:
        return f"TrigPoly({self.render()!r})"


@dataclass(frozen=True)
class HbmSystem:
    """Polynomial system of one harmonic balance approximation of x^(m+1) x'' + x^m = 0"""
    m: int
    order: int
    variables: Tuple[str, ...]
    equations: Tuple[MultiPoly, ...]
    # equations with their a-variable monomial factors, the input to elimination
    ideal_generators: Tuple[MultiPoly, ...]
    raw_coefficients: Dict[int, MultiPoly]
    harmonics: Tuple[int, ...]
    residual: TrigPoly = field(compare=False)
    amplitude: Fraction = Fraction(1)

    @property
    def j_n(self) -> int:
        """Largest harmonic index whose condition is used"""
        return self.harmonics[-1]

    @property
    def fourier_conditions(self) -> Tuple[MultiPoly, ...]:
        return self.equations[:-1]

    @property
    def normalization(self) -> MultiPoly:
        return self.equations[-1]

    def render_text(self) -> str:
        """One equation per line"""
        return "\n".join(e.render() for e in self.equations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "N": self.order,
            "amplitude": str(self.amplitude),
            "variables": list(self.variables),
            "harmonics": list(self.harmonics),
            "equations": [e.render() for e in self.equations],
            "ideal_generators": [g.render() for g in self.ideal_generators]
        }

    def original_values(self, box: List[Any]) -> List[Any]:
        return [e.evaluate(box) for e in self.equations]
