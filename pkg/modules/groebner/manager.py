import heapq
import logging
import time
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from shared.response import ArithmeticException, BudgetExhaustedException, NotZeroDimensionalException
from modules.algebra.models import (
    Monomial, MonomialOrder, MultiPoly,
    monomial_div, monomial_divides, monomial_lcm, monomial_mul
)
from modules.algebra.utils import (
    IntDivisor, normal_form, primitive_part, reduce_primitive, to_int_terms
)
from .models import GroebnerBasis, GroebnerBudget, GroebnerStats

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 500


class _Echelon:
    """Incremental row echelon form over Q that remembers row combinations.

    Every stored row satisfies vec = sum(combo[k] * image_k) where image_k is
    the k-th independent vector inserted so far.
    """

    def __init__(self):
        self.rows: List[Tuple[Monomial, Dict[Monomial, Fraction], Dict[int, Fraction]]] = []
        self.size = 0

    def add(self, vector: Dict[Monomial, Fraction]) -> Optional[Dict[int, Fraction]]:
        """Insert a vector; returns its expression in earlier images when dependent"""
        vec = dict(vector)
        combo: Dict[int, Fraction] = {}
        for pivot, row_vec, row_combo in self.rows:
            factor = vec.get(pivot)
            if not factor:
                continue
            factor = factor / row_vec[pivot]
            for m, c in row_vec.items():
                value = vec.get(m, 0) - factor * c
                if value:
                    vec[m] = value
                else:
                    vec.pop(m, None)
            for k, c in row_combo.items():
                value = combo.get(k, 0) + factor * c
                if value:
                    combo[k] = value
                else:
                    combo.pop(k, None)
        if not vec:
            return combo
        # vec = image_new - sum(combo); store with the new image index
        row_combo = {k: -c for k, c in combo.items()}
        row_combo[self.size] = Fraction(1)
        pivot = max(vec)
        self.rows.append((pivot, vec, row_combo))
        self.size += 1
        return None


class GroebnerManager:
    """Buchberger completion, order change and elimination for zero-dimensional ideals"""

    # Helpers

    @staticmethod
    def _ambient(polys: Sequence[MultiPoly]) -> Tuple[str, ...]:
        if not polys:
            raise ArithmeticException("empty generator list")
        variables = polys[0].variables
        for p in polys[1:]:
            if p.variables != variables:
                raise ArithmeticException(
                    f"mismatched ambient variable lists {variables} and {p.variables}"
                )
        return variables

    @staticmethod
    def _prepare(terms: Dict[Monomial, int], order: MonomialOrder) -> IntDivisor:
        lm = max(terms, key=order.key)
        if terms[lm] < 0:
            terms = {m: -c for m, c in terms.items()}
        return terms, lm, terms[lm]

    @staticmethod
    def _int_spoly(f: IntDivisor, g: IntDivisor) -> Dict[Monomial, int]:
        f_terms, f_lm, f_lc = f
        g_terms, g_lm, g_lc = g
        lcm = monomial_lcm(f_lm, g_lm)
        f_shift, g_shift = monomial_div(lcm, f_lm), monomial_div(lcm, g_lm)
        d = gcd(f_lc, g_lc)
        f_factor, g_factor = g_lc // d, f_lc // d
        result: Dict[Monomial, int] = {}
        for m, c in f_terms.items():
            if m != f_lm:
                t = monomial_mul(m, f_shift)
                result[t] = result.get(t, 0) + f_factor * c
        for m, c in g_terms.items():
            if m != g_lm:
                t = monomial_mul(m, g_shift)
                value = result.get(t, 0) - g_factor * c
                if value:
                    result[t] = value
                else:
                    result.pop(t, None)
        return {m: c for m, c in result.items() if c}

    @staticmethod
    def _bits(terms: Dict[Monomial, int]) -> int:
        return sum(abs(c).bit_length() for c in terms.values())

    def _to_poly(self, variables: Tuple[str, ...], terms: Dict[Monomial, int]) -> MultiPoly:
        return primitive_part(MultiPoly(variables, terms))

    # Operations

    def s_polynomial(self, f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
        """Leading-term-cancelling combination lcm/LT(f)*f - lcm/LT(g)*g"""
        f._check_ambient(g)
        if f.is_zero() or g.is_zero():
            raise ArithmeticException("S-polynomial of the zero polynomial")
        f_lm, g_lm = f.leading_monomial(order), g.leading_monomial(order)
        lcm = monomial_lcm(f_lm, g_lm)
        left = f.mul_term(monomial_div(lcm, f_lm), 1 / f.terms[f_lm])
        right = g.mul_term(monomial_div(lcm, g_lm), 1 / g.terms[g_lm])
        return left - right

    def buchberger(
        self,
        gens: Sequence[MultiPoly],
        order: MonomialOrder = MonomialOrder.LEX,
        budget: Optional[GroebnerBudget] = None
    ) -> GroebnerBasis:
        """Reduced Groebner basis of the ideal generated by gens"""
        start = time.perf_counter()
        budget = budget or GroebnerBudget.default()
        variables = self._ambient(list(gens))
        stats = GroebnerStats(strategy="direct")
        inputs = [to_int_terms(p) for p in gens if not p.is_zero()]
        if not inputs:
            raise ArithmeticException("all generators are zero")

        basis: List[IntDivisor] = []
        active: List[bool] = []
        live: Set[Tuple[int, int]] = set()
        queue: list = []

        def reducers() -> List[IntDivisor]:
            return [g for g, keep in zip(basis, active) if keep]

        def pair_key(i: int, j: int) -> tuple:
            lcm = monomial_lcm(basis[i][1], basis[j][1])
            return (sum(lcm), order.key(lcm), i, j)

        def update(element: IntDivisor) -> None:
            """Gebauer-Moeller installation of a new basis element"""
            f_lm = element[1]
            k = len(basis)
            for pair in list(live):
                i, j = pair
                lcm_ij = monomial_lcm(basis[i][1], basis[j][1])
                if (monomial_divides(f_lm, lcm_ij)
                        and lcm_ij != monomial_lcm(basis[i][1], f_lm)
                        and lcm_ij != monomial_lcm(basis[j][1], f_lm)):
                    live.discard(pair)
                    stats.pairs_pruned += 1
            by_lcm: Dict[Monomial, List[int]] = {}
            for i, keep in enumerate(active):
                if keep:
                    by_lcm.setdefault(monomial_lcm(basis[i][1], f_lm), []).append(i)
            minimal: List[Monomial] = []
            for lcm in sorted(by_lcm, key=order.key):
                if all(not monomial_divides(other, lcm) for other in minimal):
                    minimal.append(lcm)
                else:
                    stats.pairs_pruned += len(by_lcm[lcm])
            basis.append(element)
            active.append(True)
            for lcm in minimal:
                members = by_lcm[lcm]
                if any(lcm == monomial_mul(basis[i][1], f_lm) for i in members):
                    stats.pairs_pruned += len(members)
                    continue
                pair = (min(members), k)
                live.add(pair)
                heapq.heappush(queue, (pair_key(*pair), pair))
            for i in range(k):
                if active[i] and monomial_divides(f_lm, basis[i][1]):
                    active[i] = False
            stats.total_coefficient_bits = sum(
                self._bits(g[0]) for g, keep in zip(basis, active) if keep
            )
            if stats.total_coefficient_bits > budget.max_coefficient_bits:
                stats.elapsed_seconds = time.perf_counter() - start
                raise BudgetExhaustedException(
                    f"coefficient budget of {budget.max_coefficient_bits} bits exhausted",
                    stats.to_dict()
                )

        unit = False
        for terms in sorted(inputs, key=lambda t: order.key(max(t, key=order.key))):
            remainder, bits = reduce_primitive(terms, reducers(), order)
            stats.max_coefficient_bits = max(stats.max_coefficient_bits, bits)
            if not remainder:
                continue
            element = self._prepare(remainder, order)
            update(element)
            if not any(element[1]):
                unit = True
                break

        while queue and not unit:
            _, pair = heapq.heappop(queue)
            if pair not in live:
                continue
            live.discard(pair)
            stats.spairs_processed += 1
            if stats.spairs_processed > budget.max_spairs:
                stats.elapsed_seconds = time.perf_counter() - start
                raise BudgetExhaustedException(
                    f"S-pair budget of {budget.max_spairs} exhausted",
                    stats.to_dict()
                )
            if stats.spairs_processed % PROGRESS_EVERY == 0:
                logger.info(
                    f"Buchberger progress: {stats.spairs_processed} S-pairs, "
                    f"{sum(active)} active generators, {len(live)} pairs pending, "
                    f"{stats.max_coefficient_bits} max coefficient bits"
                )
            i, j = pair
            s = self._int_spoly(basis[i], basis[j])
            if not s:
                stats.reductions_to_zero += 1
                continue
            remainder, bits = reduce_primitive(s, reducers(), order)
            stats.max_coefficient_bits = max(stats.max_coefficient_bits, bits)
            if not remainder:
                stats.reductions_to_zero += 1
                continue
            element = self._prepare(remainder, order)
            update(element)
            if not any(element[1]):
                unit = True

        if unit:
            generators = (MultiPoly.constant(variables, 1),)
        else:
            generators = self._interreduce(variables, reducers(), order)
        stats.basis_size = len(generators)
        stats.elapsed_seconds = time.perf_counter() - start
        logger.info(
            f"Buchberger ({order.value}) finished: {stats.basis_size} generators, "
            f"{stats.spairs_processed} S-pairs, {stats.reductions_to_zero} zero reductions, "
            f"{stats.elapsed_seconds:.2f}s"
        )
        return GroebnerBasis(generators=generators, order=order, variables=variables, stats=stats)

    def _interreduce(
        self,
        variables: Tuple[str, ...],
        elements: List[IntDivisor],
        order: MonomialOrder
    ) -> Tuple[MultiPoly, ...]:
        minimal: List[IntDivisor] = []
        for element in sorted(elements, key=lambda e: order.key(e[1])):
            if all(not monomial_divides(kept[1], element[1]) for kept in minimal):
                minimal.append(element)
        reduced = []
        for index, element in enumerate(minimal):
            others = minimal[:index] + minimal[index + 1:]
            remainder, _ = reduce_primitive(element[0], others, order)
            reduced.append(self._to_poly(variables, remainder))
        return tuple(sorted(reduced, key=lambda g: order.key(g.leading_monomial(order))))

    def compute_basis(
        self,
        gens: Sequence[MultiPoly],
        order: MonomialOrder = MonomialOrder.LEX,
        budget: Optional[GroebnerBudget] = None,
        strategy: str = "direct"
    ) -> GroebnerBasis:
        """Direct Buchberger, or grevlex first and FGLM to the target order"""
        if strategy == "fglm" and order != MonomialOrder.GREVLEX:
            graded = self.buchberger(gens, MonomialOrder.GREVLEX, budget)
            return self.fglm(graded, order)
        if strategy not in ("direct", "fglm"):
            raise ArithmeticException(f"unknown basis strategy {strategy!r}")
        return self.buchberger(gens, order, budget)

    def is_groebner(self, basis: GroebnerBasis) -> bool:
        """Buchberger criterion: every S-polynomial reduces to zero"""
        gens = list(basis.generators)
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                s = self.s_polynomial(gens[i], gens[j], basis.order)
                if not normal_form(s, gens, basis.order).is_zero():
                    return False
        return True

    def eliminate_univariate(self, basis: GroebnerBasis, variable: Union[int, str, None] = None) -> MultiPoly:
        """The generator that involves only the elimination (last) variable"""
        if variable is None:
            index = len(basis.variables) - 1
        elif isinstance(variable, str):
            index = basis.variables.index(variable)
        else:
            index = variable
        for g in basis.generators:
            if not g.is_constant() and g.is_univariate_in(index):
                return primitive_part(g)
        raise NotZeroDimensionalException()

    def _check_zero_dimensional(self, basis: GroebnerBasis) -> None:
        lms = basis.leading_monomials()
        for i in range(len(basis.variables)):
            if not any(lm[i] and sum(lm) == lm[i] for lm in lms):
                raise NotZeroDimensionalException(
                    f"no pure power of {basis.variables[i]} among the leading monomials"
                )

    def fglm(self, basis: GroebnerBasis, target: MonomialOrder = MonomialOrder.LEX) -> GroebnerBasis:
        """Change of order for a zero-dimensional reduced basis"""
        start = time.perf_counter()
        self._check_zero_dimensional(basis)
        variables = basis.variables
        arity = len(variables)
        gens = list(basis.generators)
        one = (0,) * arity

        staircase: List[Monomial] = []
        images: Dict[Monomial, MultiPoly] = {}
        echelon = _Echelon()
        new_gens: List[MultiPoly] = []
        new_lms: List[Monomial] = []
        seen: Set[Monomial] = set()
        candidates = [(target.key(one), one, None, -1)]

        while candidates:
            _, m, parent, var = heapq.heappop(candidates)
            if m in seen:
                continue
            seen.add(m)
            if any(monomial_divides(lm, m) for lm in new_lms):
                continue
            if parent is None:
                image = normal_form(MultiPoly.constant(variables, 1), gens, basis.order)
            else:
                image = normal_form(
                    images[parent] * MultiPoly.variable(variables, var), gens, basis.order
                )
            dependency = echelon.add(image.terms)
            if dependency is not None:
                relation = {m: Fraction(1)}
                for k, c in dependency.items():
                    relation[staircase[k]] = relation.get(staircase[k], 0) - c
                new_gens.append(primitive_part(MultiPoly(variables, relation)))
                new_lms.append(m)
                continue
            staircase.append(m)
            images[m] = image
            for v in range(arity):
                child = tuple(e + 1 if i == v else e for i, e in enumerate(m))
                if child not in seen:
                    heapq.heappush(candidates, (target.key(child), child, m, v))

        generators = tuple(sorted(new_gens, key=lambda g: target.key(g.leading_monomial(target))))
        stats = GroebnerStats(**{**basis.stats.to_dict(), "strategy": "fglm"})
        stats.basis_size = len(generators)
        stats.elapsed_seconds = basis.stats.elapsed_seconds + time.perf_counter() - start
        logger.info(
            f"FGLM {basis.order.value} -> {target.value}: quotient dimension {len(staircase)}, "
            f"{len(generators)} generators"
        )
        return GroebnerBasis(generators=generators, order=target, variables=variables, stats=stats)

    def minimal_polynomial(self, basis: GroebnerBasis, index: int, max_degree: int = 4096) -> MultiPoly:
        """Monic-free primitive eliminant of one variable, from normal forms of its powers"""
        self._check_zero_dimensional(basis)
        variables = basis.variables
        gens = list(basis.generators)
        x = MultiPoly.variable(variables, index)
        echelon = _Echelon()
        image = normal_form(MultiPoly.constant(variables, 1), gens, basis.order)
        for degree in range(max_degree + 1):
            dependency = echelon.add(image.terms)
            if dependency is not None:
                relation: Dict[Monomial, Fraction] = {
                    tuple(degree if i == index else 0 for i in range(len(variables))): Fraction(1)
                }
                for k, c in dependency.items():
                    m = tuple(k if i == index else 0 for i in range(len(variables)))
                    relation[m] = relation.get(m, 0) - c
                return primitive_part(MultiPoly(variables, relation))
            image = normal_form(image * x, gens, basis.order)
        raise NotZeroDimensionalException(
            f"no relation among powers of {variables[index]} up to degree {max_degree}"
        )


# Global instance
groebner_manager = GroebnerManager()
