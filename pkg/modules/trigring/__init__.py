"""
Cosine series with polynomial coefficients and the harmonic balance systems built from them
"""
from .manager import TrigRingManager, trigring_manager
from .models import TrigPoly, HbmSystem

__all__ = [
    "TrigRingManager",
    "trigring_manager",
    "TrigPoly",
    "HbmSystem"
]
