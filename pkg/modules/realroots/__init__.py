"""
Certified real roots of univariate polynomials and triangular back-substitution
"""
from .manager import RealRootManager, realroots_manager
from .models import UniPoly, RootEnclosure, SolutionEnclosure

__all__ = [
    "RealRootManager",
    "realroots_manager",
    "UniPoly",
    "RootEnclosure",
    "SolutionEnclosure"
]
