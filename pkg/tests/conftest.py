from fractions import Fraction
from functools import lru_cache

import pytest

from modules.algebra.models import MultiPoly
from modules.solver.manager import solver_manager


def proportional(p: MultiPoly, q: MultiPoly) -> bool:
    """p = c q for some nonzero rational c"""
    if set(p.terms) != set(q.terms) or not p.terms:
        return False
    ratios = {p.terms[m] / q.terms[m] for m in p.terms}
    return len(ratios) == 1


def univariate_coefficients(p: MultiPoly, index: int) -> dict:
    return {m[index]: c for m, c in p.terms.items()}


def scaled_match(p: MultiPoly, index: int, expected: dict) -> bool:
    """Univariate p matches {degree: coefficient} up to a nonzero scalar"""
    actual = univariate_coefficients(p, index)
    if set(actual) != set(expected):
        return False
    ratios = {Fraction(actual[d]) / expected[d] for d in expected}
    return len(ratios) == 1


@pytest.fixture(scope="session")
def solve():
    """Solve (m, N) once per test session"""

    @lru_cache(maxsize=None)
    def run(m: int, order: int, digits: int = 30):
        return solver_manager.solve_hbm(m, order, digits=digits)

    return run
