import logging
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from shared.response import (
    BudgetExhaustedException, HbmException, InconsistentBranchException, ValidationException
)
from shared.settings import settings
from shared.utils import parse_rational
from modules.algebra.models import MonomialOrder, RatInterval
from modules.algebra.utils import mpf_enclosure, pi_enclosure
from modules.groebner.manager import groebner_manager
from modules.groebner.models import GroebnerBasis, GroebnerBudget
from modules.realroots.manager import realroots_manager
from modules.realroots.models import SolutionEnclosure, UniPoly
from modules.trigring.manager import trigring_manager
from modules.trigring.models import HbmSystem
from .models import ErrorTableEntry, HbmSolution, SolveOutcome, SolveStatus

logger = logging.getLogger(__name__)

# Cells that need a larger Groebner budget than the default
STRETCH_CELLS = {(0, 5), (0, 6), (1, 4)}
# Cells that finish in seconds under the default budget; the only ones the API serves
API_CELLS = {(m, n) for m in range(3) for n in range(1, 4)} | {(0, 4)}
PI_BITS = 256


def eps_for_digits(digits: int) -> Fraction:
    """Enclosure width that pins `digits` significant digits of O(1) quantities"""
    return Fraction(1, 10 ** (digits + 2))


def interval_abs(value: RatInterval) -> RatInterval:
    if value.lo >= 0:
        return value
    if value.hi <= 0:
        return -value
    return RatInterval(Fraction(0), value.magnitude)


def _table_cell(args: Tuple[int, int, Optional[int], Optional[int], str]) -> ErrorTableEntry:
    """Process-pool entry point; solves one (m, N) cell"""
    m, order, digits, budget_bits, strategy = args
    budget = None
    if budget_bits is not None:
        budget = GroebnerBudget(settings.budget_spairs, budget_bits)
    return solver_manager.table_entry(m, order, digits=digits, budget=budget, strategy=strategy)


class SolverManager:
    """End-to-end harmonic balance pipeline"""

    @staticmethod
    def resolve_strategy(order: int, strategy: str = "auto") -> str:
        if strategy == "auto":
            return "fglm" if order >= 3 else "direct"
        if strategy not in ("direct", "fglm"):
            raise ValidationException([f"strategy must be auto, direct or fglm, got {strategy!r}"])
        return strategy

    @staticmethod
    def budget_for(m: int, order: int, budget: Optional[GroebnerBudget] = None) -> GroebnerBudget:
        budget = budget or GroebnerBudget.default()
        if (m, order) in STRETCH_CELLS:
            return budget.scaled(settings.stretch_budget_multiplier)
        return budget

    def solve_hbm(
        self,
        m: int,
        order: int,
        digits: Optional[int] = None,
        budget: Optional[GroebnerBudget] = None,
        amplitude: Union[int, str, Fraction] = 1,
        strategy: str = "auto"
    ) -> SolveOutcome:
        """Build, eliminate, isolate, back-substitute and rank by residual"""
        digits = settings.digits if digits is None else digits
        if digits < 1:
            raise ValidationException([f"digits must be >= 1, got {digits}"])
        amplitude = parse_rational(amplitude, "amplitude")
        method = self.resolve_strategy(order, strategy)
        system = trigring_manager.build_hbm_system(m, order, amplitude)
        start = time.perf_counter()
        logger.info(f"Solving m={m}, N={order} ({method}, {digits} digits)")

        try:
            basis = groebner_manager.compute_basis(
                system.ideal_generators, MonomialOrder.LEX, self.budget_for(m, order, budget), method
            )
        except BudgetExhaustedException as e:
            logger.warning(f"m={m}, N={order}: {e.message}")
            return SolveOutcome(
                m=m, order=order, status=SolveStatus.BUDGET_EXHAUSTED,
                stats=e.stats, message=e.message
            )

        stats = basis.stats.to_dict()
        if any(g.is_constant() for g in basis.generators):
            return SolveOutcome(
                m=m, order=order, status=SolveStatus.NO_ADMISSIBLE_SOLUTION,
                stats=stats, message="the system has no solutions"
            )

        univariate = UniPoly.from_multipoly(
            groebner_manager.eliminate_univariate(basis), len(system.variables) - 1
        )
        roots = realroots_manager.isolate_positive_roots(univariate)
        logger.info(
            f"m={m}, N={order}: univariate degree {univariate.degree}, {len(roots)} positive roots"
        )

        eps = eps_for_digits(digits)
        candidates: List[HbmSolution] = []
        for root in roots:
            try:
                branches = realroots_manager.back_substitute_branches(basis, root, eps, univariate)
            except InconsistentBranchException as e:
                logger.info(f"Skipping w root in {root.interval}: {e.message}")
                continue
            for branch in branches:
                if branch.coefficients[0].contains_zero():
                    logger.debug(f"Discarding a1 = 0 branch at w ~ {root.decimal(8)}")
                    continue
                if not self.satisfies_system(system, branch):
                    logger.warning(f"Branch at w ~ {root.decimal(8)} fails the original system")
                    continue
                candidates.append(self._to_solution(system, branch, univariate.degree))

        stats["elapsed_seconds"] = time.perf_counter() - start
        if not candidates:
            return SolveOutcome(
                m=m, order=order, status=SolveStatus.NO_ADMISSIBLE_SOLUTION, stats=stats,
                univariate=univariate, positive_roots=len(roots),
                message="no solution with w > 0 and a1 != 0"
            )

        candidates, best = self._select(system, basis, univariate, candidates, digits)
        logger.info(
            f"m={m}, N={order}: {len(candidates)} admissible, best w ~ {best.omega.decimal(12)}, "
            f"C ~ {best.period_coefficient.decimal(12)}"
        )
        return SolveOutcome(
            m=m, order=order, status=SolveStatus.SOLVED, candidates=candidates, best=best,
            stats=stats, univariate=univariate, positive_roots=len(roots)
        )

    @staticmethod
    def satisfies_system(system: HbmSystem, solution: SolutionEnclosure) -> bool:
        box = solution.box()
        return all(RatInterval.coerce(value).contains_zero() for value in system.original_values(box))

    def _to_solution(self, system: HbmSystem, branch: SolutionEnclosure, degree: int) -> HbmSolution:
        period = pi_enclosure(PI_BITS) * 2 / branch.omega.interval
        return HbmSolution(
            m=system.m,
            order=system.order,
            variables=system.variables[:-1],
            omega=branch.omega,
            coefficients=branch.coefficients,
            residual=trigring_manager.parseval_norm(system.residual, branch, PI_BITS),
            univariate_degree=degree,
            period=period,
            period_coefficient=period / system.amplitude,
            amplitude=system.amplitude
        )

    def _refine_solution(
        self,
        system: HbmSystem,
        basis: GroebnerBasis,
        univariate: UniPoly,
        solution: HbmSolution,
        digits: int
    ) -> HbmSolution:
        branches = realroots_manager.back_substitute_branches(
            basis, solution.omega, eps_for_digits(digits), univariate
        )
        for branch in branches:
            if all(a.overlaps(b) for a, b in zip(branch.coefficients, solution.coefficients)):
                return self._to_solution(system, branch, solution.univariate_degree)
        return solution

    def _select(
        self,
        system: HbmSystem,
        basis: GroebnerBasis,
        univariate: UniPoly,
        candidates: List[HbmSolution],
        digits: int
    ) -> Tuple[List[HbmSolution], HbmSolution]:
        """Minimal residual; overlapping residuals are refined before falling back to smaller w"""
        current = digits
        while True:
            ranked = sorted(candidates, key=lambda c: (c.residual.midpoint, c.omega.midpoint))
            contenders = [c for c in ranked if c.residual.overlaps(ranked[0].residual)]
            if len(contenders) == 1 or current >= settings.refine_digit_cap:
                break
            current = min(2 * current, settings.refine_digit_cap)
            logger.info(f"{len(contenders)} residual enclosures overlap; refining to {current} digits")
            candidates = [
                self._refine_solution(system, basis, univariate, c, current) if c in contenders else c
                for c in candidates
            ]
        best = min(contenders, key=lambda c: c.omega.midpoint)
        return ranked, best

    def period_for_amplitude(self, solution: HbmSolution, amplitude: Union[int, str, Fraction]) -> RatInterval:
        """T_N(A; m) = C_N(m) A"""
        amplitude = parse_rational(amplitude, "amplitude")
        if amplitude <= 0:
            raise ValidationException([f"amplitude must be positive, got {amplitude}"])
        return solution.period_coefficient * amplitude

    @staticmethod
    def weak_period_enclosure(bits: int = PI_BITS) -> RatInterval:
        """2 sqrt(2 pi), the period constant of the weak solution"""
        with mpmath.workprec(bits):
            return mpf_enclosure(mpmath.sqrt(2 * mpmath.pi)) * 2

    def relative_error_percent(self, period_coefficient: RatInterval) -> RatInterval:
        """e = 100 |C - 2 sqrt(2 pi)| / (2 sqrt(2 pi))"""
        weak = self.weak_period_enclosure()
        return interval_abs(period_coefficient - weak) * 100 / weak

    @staticmethod
    def omega_squared_exact(outcome: SolveOutcome) -> Optional[Fraction]:
        """w^2 of the selected solution when it is rational, else None"""
        p = outcome.univariate
        if p is None or outcome.best is None or any(p.coefficients[1::2]):
            return None
        in_squares = UniPoly(p.coefficients[::2])
        target = outcome.best.omega.interval ** 2
        for enclosure in realroots_manager.isolate_positive_roots(in_squares):
            if enclosure.interval.contains(target):
                refined = realroots_manager.refine(enclosure, in_squares, Fraction(1, 10 ** 40))
                return refined.interval.lo if refined.exact else None
        return None

    def table_entry(
        self,
        m: int,
        order: int,
        digits: Optional[int] = None,
        budget: Optional[GroebnerBudget] = None,
        strategy: str = "auto"
    ) -> ErrorTableEntry:
        try:
            outcome = self.solve_hbm(m, order, digits=digits, budget=budget, strategy=strategy)
        except HbmException as e:
            logger.error(f"Table cell m={m}, N={order} failed: {e.message}")
            return ErrorTableEntry(m=m, order=order, status=SolveStatus.NO_ADMISSIBLE_SOLUTION, message=e.message)
        if not outcome.solved:
            return ErrorTableEntry(m=m, order=order, status=outcome.status, message=outcome.message)
        coefficient = outcome.best.period_coefficient
        return ErrorTableEntry(
            m=m,
            order=order,
            status=outcome.status,
            period_coefficient=coefficient,
            relative_error_percent=self.relative_error_percent(coefficient)
        )

    def error_table(
        self,
        max_m: int,
        max_order: int,
        budget: Optional[GroebnerBudget] = None,
        workers: Optional[int] = None,
        digits: Optional[int] = None,
        strategy: str = "auto",
        cells: Optional[Sequence[Tuple[int, int]]] = None
    ) -> List[ErrorTableEntry]:
        """Relative errors for every (m, N) with 0 <= m <= max_m and 1 <= N <= max_order"""
        if cells is None:
            cells = [(m, n) for m in range(max_m + 1) for n in range(1, max_order + 1)]
        cells = list(cells)
        if not cells:
            return []
        workers = workers or settings.table_workers
        budget_bits = budget.max_coefficient_bits if budget else None
        if budget is not None and budget.max_spairs != settings.budget_spairs:
            # a process pool only carries the bit cap; keep custom pair caps in-process
            workers = 1
        jobs = [(m, n, digits, budget_bits, strategy) for m, n in cells]
        logger.info(f"Error table: {len(jobs)} cells on {workers} worker(s)")
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(_table_cell, jobs))
        return [self.table_entry(m, n, digits=digits, budget=budget, strategy=strategy) for m, n in cells]

    def scaled_system_check(
        self,
        m: int,
        order: int,
        amplitude: Union[int, str, Fraction],
        digits: Optional[int] = None,
        budget: Optional[GroebnerBudget] = None
    ) -> bool:
        """Solutions at amplitude A are the A = 1 solutions with a scaled by A and w by 1/A"""
        amplitude = parse_rational(amplitude, "amplitude")
        if amplitude <= 0:
            raise ValidationException([f"amplitude must be positive, got {amplitude}"])
        base = self.solve_hbm(m, order, digits=digits, budget=budget)
        scaled = self.solve_hbm(m, order, digits=digits, budget=budget, amplitude=amplitude)
        if not base.solved or not scaled.solved:
            return False
        reference = base.best
        expected_omega = reference.omega.interval / amplitude
        expected = [c * amplitude for c in reference.coefficients]
        for candidate in scaled.candidates:
            if candidate.omega.interval.overlaps(expected_omega) and all(
                a.overlaps(b) for a, b in zip(candidate.coefficients, expected)
            ):
                return True
        return False

    def sample_waveform(
        self,
        solution: HbmSolution,
        amplitude: Union[int, str, Fraction],
        times: Sequence[float]
    ) -> np.ndarray:
        """x_N(t) of the approximation rescaled to amplitude A"""
        amplitude = parse_rational(amplitude, "amplitude")
        if amplitude <= 0:
            raise ValidationException([f"amplitude must be positive, got {amplitude}"])
        scale = amplitude / solution.amplitude
        values = [c.midpoint * scale for c in solution.coefficients] + [solution.omega.midpoint / scale]
        ansatz = trigring_manager.build_ansatz(solution.order)
        return np.atleast_1d(ansatz.evaluate(values, times))


# Global instance
solver_manager = SolverManager()
