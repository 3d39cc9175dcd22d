from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import mpmath
import numpy as np


class PeriodMethod(str, Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    ODE = "ode"


@dataclass(frozen=True)
class PeriodResult:
    """A reference period with the method that produced it"""
    value: Any
    method: PeriodMethod
    estimated_error: float
    amplitude: float
    k: Optional[float] = None

    def decimal(self, digits: int) -> str:
        return mpmath.nstr(mpmath.mpf(self.value), digits, strip_zeros=False)

    def to_dict(self, digits: int) -> Dict[str, Any]:
        return {
            "value": self.decimal(digits),
            "method": self.method.value,
            "estimated_error": float(self.estimated_error),
            "amplitude": float(self.amplitude),
            "k": None if self.k is None else float(self.k)
        }


@dataclass(frozen=True)
class PhasePoint:
    t: float
    x: float
    y: float


@dataclass
class Trajectory:
    """Samples of the regularized Hamiltonian flow started at (A, 0)"""
    amplitude: float
    k: float
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    energy_drift: float
    steps: int = 0
    dense: Any = field(default=None, repr=False)

    def points(self) -> List[PhasePoint]:
        return [PhasePoint(float(a), float(b), float(c)) for a, b, c in zip(self.t, self.x, self.y)]

    def __len__(self) -> int:
        return len(self.t)
