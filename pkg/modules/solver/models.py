from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from shared.utils import format_decimal, format_fixed
from modules.algebra.models import RatInterval
from modules.realroots.models import RootEnclosure, SolutionEnclosure, UniPoly


class SolveStatus(str, Enum):
    SOLVED = "solved"
    BUDGET_EXHAUSTED = "budget-exhausted"
    NO_ADMISSIBLE_SOLUTION = "no-admissible-solution"


def interval_pair(value: RatInterval) -> List[str]:
    return [str(value.lo), str(value.hi)]


@dataclass(frozen=True)
class HbmSolution:
    """One admissible solution with its residual and period constant"""
    m: int
    order: int
    variables: Tuple[str, ...]
    omega: RootEnclosure
    coefficients: Tuple[RatInterval, ...]
    residual: RatInterval
    univariate_degree: int
    period: RatInterval
    period_coefficient: RatInterval
    amplitude: Fraction = Fraction(1)

    def enclosure(self) -> SolutionEnclosure:
        return SolutionEnclosure(omega=self.omega, coefficients=self.coefficients, variables=self.variables)

    def coefficient_sum(self) -> RatInterval:
        return self.enclosure().coefficient_sum()

    def to_dict(self, digits: int) -> Dict[str, Any]:
        return {
            "m": self.m,
            "N": self.order,
            "omega_decimal": self.omega.decimal(digits),
            "omega_interval": interval_pair(self.omega.interval),
            "coefficients": [
                {
                    "name": name,
                    "decimal": value.decimal(digits),
                    "interval": interval_pair(value)
                }
                for name, value in zip(self.variables, self.coefficients)
            ],
            "period_coefficient_decimal": self.period_coefficient.decimal(digits),
            "period_coefficient_interval": interval_pair(self.period_coefficient),
            "residual_decimal": self.residual.decimal(digits),
            "univariate_degree": self.univariate_degree
        }


@dataclass
class SolveOutcome:
    """Result of one (m, N) pipeline run; failures are data, not exceptions"""
    m: int
    order: int
    status: SolveStatus
    candidates: List[HbmSolution] = field(default_factory=list)
    best: Optional[HbmSolution] = None
    stats: Dict[str, Any] = field(default_factory=dict)
    univariate: Optional[UniPoly] = None
    positive_roots: int = 0
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status == SolveStatus.SOLVED and self.best is not None

    def to_dict(self, digits: int) -> Dict[str, Any]:
        report: Dict[str, Any] = {"m": self.m, "N": self.order}
        if self.best is not None:
            report.update(self.best.to_dict(digits))
        report.update({
            "status": self.status.value,
            "candidates": len(self.candidates),
            "positive_roots": self.positive_roots,
            "candidate_details": [
                {
                    "omega_decimal": c.omega.decimal(digits),
                    "residual_decimal": c.residual.decimal(digits),
                    "period_coefficient_decimal": c.period_coefficient.decimal(digits)
                }
                for c in self.candidates
            ],
            "stats": self.stats,
            "message": self.message
        })
        return report


@dataclass(frozen=True)
class ErrorTableEntry:
    """One cell of the relative error table"""
    m: int
    order: int
    status: SolveStatus
    period_coefficient: Optional[RatInterval] = None
    relative_error_percent: Optional[RatInterval] = None
    message: str = ""

    def row(self, decimals: int) -> List[str]:
        """(m, N, C_N, error_percent); unsolved cells render as dashes"""
        if self.relative_error_percent is None:
            return [str(self.m), str(self.order), "-", "-"]
        return [
            str(self.m),
            str(self.order),
            format_fixed(self.period_coefficient.midpoint, 4),
            format_fixed(self.relative_error_percent.midpoint, decimals)
        ]

    def to_dict(self, decimals: int) -> Dict[str, Any]:
        data: Dict[str, Any] = {"m": self.m, "N": self.order, "status": self.status.value}
        if self.relative_error_percent is not None:
            data["period_coefficient_decimal"] = format_decimal(self.period_coefficient.midpoint, 12)
            data["error_percent"] = format_fixed(self.relative_error_percent.midpoint, decimals)
        if self.message:
            data["message"] = self.message
        return data

