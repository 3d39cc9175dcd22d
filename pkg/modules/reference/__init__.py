"""
Reference periods and solutions: closed form, quadrature and ODE simulation
"""
from .manager import ReferenceManager, reference_manager
from .models import PeriodMethod, PeriodResult, PhasePoint, Trajectory

__all__ = [
    "ReferenceManager",
    "reference_manager",
    "PeriodMethod",
    "PeriodResult",
    "PhasePoint",
    "Trajectory"
]
