"""
Groebner bases for the zero-dimensional harmonic balance ideals
"""
from .manager import GroebnerManager, groebner_manager
from .models import GroebnerBasis, GroebnerBudget, GroebnerStats, BasisResponse

__all__ = [
    "GroebnerManager",
    "groebner_manager",
    "GroebnerBasis",
    "GroebnerBudget",
    "GroebnerStats",
    "BasisResponse"
]
