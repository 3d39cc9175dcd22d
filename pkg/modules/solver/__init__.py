"""
Harmonic balance pipeline: period constants and relative error tables
"""
from .manager import SolverManager, solver_manager
from .models import ErrorTableEntry, HbmSolution, SolveOutcome, SolveStatus

__all__ = [
    "SolverManager",
    "solver_manager",
    "ErrorTableEntry",
    "HbmSolution",
    "SolveOutcome",
    "SolveStatus"
]
