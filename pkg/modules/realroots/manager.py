import logging
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Optional, Sequence, Tuple, Union

from shared.response import (
    ArithmeticException, EndpointRootException, InconsistentBranchException
)
from modules.algebra.models import MultiPoly, RatInterval
from modules.groebner.manager import groebner_manager
from modules.groebner.models import GroebnerBasis
from .models import RootEnclosure, SolutionEnclosure, UniPoly

logger = logging.getLogger(__name__)

# Newton steps keep dyadic endpoints on a grid this many bits finer than the current width
NEWTON_GRID_BITS = 20
BISECTIONS_BEFORE_NEWTON = 4


def _dyadic_ceiling(value: Fraction) -> Fraction:
    """Smallest power of two >= value (value > 0)"""
    power = Fraction(1)
    while power < value:
        power *= 2
    while power / 2 >= value:
        power /= 2
    return power


class RealRootManager:
    """Sturm-certified real root isolation and triangular back-substitution"""

    # Sturm sequences

    def sturm_sequence(self, p: UniPoly, normalize: bool = False) -> List[UniPoly]:
        """p, p', -rem(p_{i-1}, p_i), ... down to a nonzero constant.

        With normalize=True each remainder is divided by a positive rational
        so coefficients stay small; sign variations are unchanged.
        """
        if p.is_zero():
            raise ArithmeticException("Sturm sequence of the zero polynomial")
        chain = [p]
        if p.degree < 1:
            return chain
        chain.append(p.derivative())
        while chain[-1].degree > 0:
            remainder = -(chain[-2] % chain[-1])
            if remainder.is_zero():
                break
            if normalize:
                remainder = remainder.positive_content_part()
            chain.append(remainder)
        return chain

    @staticmethod
    def sign_variations(chain: Sequence[UniPoly], x: Fraction) -> int:
        signs = [s for s in (q.sign_at(x) for q in chain) if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count_roots(
        self,
        p: UniPoly,
        interval: RatInterval,
        chain: Optional[List[UniPoly]] = None
    ) -> int:
        """Distinct real roots in the open interval (lo, hi)"""
        for endpoint in (interval.lo, interval.hi):
            if p(endpoint) == 0:
                raise EndpointRootException(endpoint)
        if chain is None:
            chain = self.sturm_sequence(p.square_free(), normalize=True)
        return self.sign_variations(chain, interval.lo) - self.sign_variations(chain, interval.hi)

    @staticmethod
    def cauchy_bound(p: UniPoly) -> Fraction:
        """1 + max|c_i| / |c_lead|"""
        lead = abs(p.leading)
        return 1 + max((abs(c) for c in p.coefficients[:-1]), default=Fraction(0)) / lead

    # Isolation

    def isolate_positive_roots(self, p: UniPoly) -> List[RootEnclosure]:
        """Disjoint certified enclosures of every root in (0, B]"""
        if p.is_zero():
            raise ArithmeticException("cannot isolate roots of the zero polynomial")
        q = p.square_free().primitive()
        while q.degree >= 1 and q.coefficients[0] == 0:
            q = UniPoly(q.coefficients[1:])
        if q.degree < 1:
            return []
        chain = self.sturm_sequence(q, normalize=True)
        bound = _dyadic_ceiling(self.cauchy_bound(q))
        total = self.sign_variations(chain, Fraction(0)) - self.sign_variations(chain, bound)

        found: List[RootEnclosure] = []
        stack: List[Tuple[Fraction, Fraction, int]] = [(Fraction(0), bound, total)]
        while stack:
            lo, hi, count = stack.pop()
            if count == 0:
                continue
            if count == 1:
                found.append(RootEnclosure(RatInterval(lo, hi), q.sign_at(lo), q.sign_at(hi)))
                continue
            mid = (lo + hi) / 2
            if q(mid) == 0:
                found.append(RootEnclosure(RatInterval.point(mid), 0, 0, exact=True))
                # shrink (mid - step, mid + step) until it holds only the exact root
                step = (hi - lo) / 4
                while True:
                    left, right = mid - step, mid + step
                    if (q(left) != 0 and q(right) != 0
                            and self.sign_variations(chain, left) - self.sign_variations(chain, right) == 1):
                        break
                    step /= 2
                stack.append((lo, left, self.sign_variations(chain, lo) - self.sign_variations(chain, left)))
                stack.append((right, hi, self.sign_variations(chain, right) - self.sign_variations(chain, hi)))
                continue
            v_mid = self.sign_variations(chain, mid)
            stack.append((mid, hi, v_mid - self.sign_variations(chain, hi)))
            stack.append((lo, mid, self.sign_variations(chain, lo) - v_mid))

        found.sort(key=lambda e: e.interval.lo)
        logger.debug(f"Isolated {len(found)} positive roots of a degree {q.degree} polynomial")
        return found

    def isolate_real_roots(self, p: UniPoly) -> List[RootEnclosure]:
        """All real roots: negatives by reflection, zero exactly, then positives"""
        if p.is_zero():
            raise ArithmeticException("cannot isolate roots of the zero polynomial")
        q = p.square_free().primitive()
        negatives = []
        for e in reversed(self.isolate_positive_roots(p.reflect())):
            interval = -e.interval
            negatives.append(RootEnclosure(
                interval, q.sign_at(interval.lo), q.sign_at(interval.hi), exact=e.exact
            ))
        zero = []
        if p.coefficients and p.coefficients[0] == 0:
            zero.append(RootEnclosure(RatInterval.point(0), 0, 0, exact=True))
        return negatives + zero + self.isolate_positive_roots(p)

    # Refinement

    def refine(self, enclosure: RootEnclosure, p: UniPoly, eps: Union[Fraction, int]) -> RootEnclosure:
        """Shrink an isolating interval to width <= eps.

        Bisection is the certified path. Newton steps are accepted only when
        the polynomial changes sign across the proposed sub-interval, and a
        rational root is detected exactly once the interval is narrow enough
        to hold a single candidate with denominator dividing the leading
        coefficient.
        """
        eps = Fraction(eps)
        if eps <= 0:
            raise ArithmeticException("refinement width must be positive")
        if enclosure.exact or enclosure.width <= eps:
            return enclosure
        q = p.square_free().primitive()
        dq = q.derivative()
        lead = abs(int(q.leading))
        lo, hi = enclosure.interval.lo, enclosure.interval.hi
        sign_lo, sign_hi = q.sign_at(lo), q.sign_at(hi)
        if sign_lo == 0 or sign_hi == 0 or sign_lo == sign_hi:
            raise ArithmeticException(f"[{lo}, {hi}] is not a sign-changing isolating interval")

        rational_checked = False
        bisections = 0
        while hi - lo > eps:
            if not rational_checked and hi - lo < Fraction(1, 2 * lead):
                rational_checked = True
                candidate = Fraction(round((lo + hi) / 2 * lead), lead)
                if lo <= candidate <= hi and q(candidate) == 0:
                    return RootEnclosure(RatInterval.point(candidate), 0, 0, exact=True)

            if bisections >= BISECTIONS_BEFORE_NEWTON:
                narrowed = self._newton_step(q, dq, lo, hi, sign_lo)
                if narrowed is not None:
                    lo, hi = narrowed
                    continue

            mid = (lo + hi) / 2
            s = q.sign_at(mid)
            bisections += 1
            if s == 0:
                return RootEnclosure(RatInterval.point(mid), 0, 0, exact=True)
            if s == sign_lo:
                lo = mid
            else:
                hi = mid
        return RootEnclosure(RatInterval(lo, hi), sign_lo, sign_hi)

    @staticmethod
    def _newton_step(
        q: UniPoly,
        dq: UniPoly,
        lo: Fraction,
        hi: Fraction,
        sign_lo: int
    ) -> Optional[Tuple[Fraction, Fraction]]:
        mid = (lo + hi) / 2
        slope = dq(mid)
        if slope == 0:
            return None
        guess = mid - q(mid) / slope
        if not lo < guess < hi:
            return None
        grid = (hi - lo) / 2 ** NEWTON_GRID_BITS
        scale = 1 / grid
        a = Fraction(floor(guess * scale)) / scale - grid
        b = Fraction(ceil(guess * scale)) / scale + grid
        if a <= lo or b >= hi:
            return None
        s_a, s_b = q.sign_at(a), q.sign_at(b)
        if s_a == sign_lo and s_b == -sign_lo:
            return a, b
        return None

    # Back-substitution

    @staticmethod
    def _linear_generators(basis: GroebnerBasis) -> Dict[int, List[Tuple[MultiPoly, MultiPoly]]]:
        """Per variable, generators c*v + d with v the lex-largest variable present"""
        zero = MultiPoly.zero(basis.variables)
        found: Dict[int, List[Tuple[MultiPoly, MultiPoly]]] = {}
        for g in basis.generators:
            used = g.variables_used()
            if not used:
                continue
            index = min(used)
            if g.degree_in(index) != 1:
                continue
            parts = g.coefficients_in(index)
            found.setdefault(index, []).append((parts[1], parts.get(0, zero)))
        for candidates in found.values():
            candidates.sort(key=lambda cd: (not cd[0].is_constant(), cd[0].total_degree()))
        return found

    def _complete_branch(
        self,
        basis: GroebnerBasis,
        sources: Dict[int, tuple],
        omega: RootEnclosure,
        precision: Fraction,
        linear: Dict[int, List[Tuple[MultiPoly, MultiPoly]]],
        roots: Dict[int, List[RootEnclosure]],
        minimal: Dict[int, UniPoly],
        allow_roots: bool
    ) -> List[Tuple[Dict[int, tuple], Optional[List[RatInterval]]]]:
        """Evaluate one branch from w down to a1, splitting it where a variable needs its own roots"""
        arity = len(basis.variables)
        box = [RatInterval.point(0)] * arity
        box[-1] = omega.interval
        partial: List[Tuple[Dict[int, tuple], Optional[List[RatInterval]]]] = [(dict(sources), box)]

        for index in range(arity - 2, -1, -1):
            extended = []
            for branch, values in partial:
                if values is None:
                    extended.append((branch, None))
                    continue
                source = branch.get(index)
                if source is None:
                    for c, d in linear.get(index, []):
                        if not RatInterval.coerce(c.evaluate(values)).contains_zero():
                            source = ("linear", c, d)
                            branch[index] = source
                            break
                if source is None:
                    if not allow_roots:
                        extended.append((branch, None))
                        continue
                    if index not in roots:
                        eliminant = groebner_manager.minimal_polynomial(basis, index)
                        minimal[index] = UniPoly.from_multipoly(eliminant, index)
                        roots[index] = self.isolate_real_roots(minimal[index])
                        logger.info(
                            f"{basis.variables[index]} not in shape position; "
                            f"{len(roots[index])} real roots of its minimal polynomial"
                        )
                    for k in range(len(roots[index])):
                        fork = dict(branch)
                        fork[index] = ("root", k)
                        extended.append(self._assign(fork, values, index, precision, roots, minimal))
                    continue
                extended.append(self._assign(branch, values, index, precision, roots, minimal))
            partial = extended
        return partial

    def _assign(
        self,
        branch: Dict[int, tuple],
        values: List[RatInterval],
        index: int,
        precision: Fraction,
        roots: Dict[int, List[RootEnclosure]],
        minimal: Dict[int, UniPoly]
    ) -> Tuple[Dict[int, tuple], Optional[List[RatInterval]]]:
        source = branch[index]
        values = list(values)
        if source[0] == "linear":
            _, c, d = source
            c_value = RatInterval.coerce(c.evaluate(values))
            if c_value.contains_zero():
                return branch, None
            values[index] = -(RatInterval.coerce(d.evaluate(values)) / c_value)
        else:
            k = source[1]
            roots[index][k] = self.refine(roots[index][k], minimal[index], precision)
            values[index] = roots[index][k].interval
        return branch, values

    def back_substitute_branches(
        self,
        basis: GroebnerBasis,
        omega: RootEnclosure,
        eps: Union[Fraction, int],
        univariate: Optional[UniPoly] = None,
        max_rounds: int = 32
    ) -> List[SolutionEnclosure]:
        """Every real solution of a lex basis lying over one omega root.

        Shape position is tried first: each a_i comes from a generator linear
        in a_i whose coefficient is nonzero on the current box. Variables
        without one fall back to the real roots of their minimal polynomial,
        and the combinations are filtered by interval evaluation of the
        whole basis as the enclosures shrink.
        """
        eps = Fraction(eps)
        arity = len(basis.variables)
        if univariate is None:
            univariate = UniPoly.from_multipoly(groebner_manager.eliminate_univariate(basis), arity - 1)
        linear = self._linear_generators(basis)
        roots: Dict[int, List[RootEnclosure]] = {}
        minimal: Dict[int, UniPoly] = {}
        branches: List[Dict[int, tuple]] = [{}]
        enclosure = omega
        previous = None

        for round_index in range(max_rounds):
            precision = eps / 2 ** (32 * round_index)
            enclosure = self.refine(enclosure, univariate, precision)
            survivors: List[Tuple[Dict[int, tuple], Optional[List[RatInterval]]]] = []
            for sources in branches:
                for branch, box in self._complete_branch(
                    basis, sources, enclosure, precision, linear, roots, minimal,
                    allow_roots=round_index >= 2
                ):
                    if box is None or all(
                        RatInterval.coerce(g.evaluate(box)).contains_zero() for g in basis.generators
                    ):
                        survivors.append((branch, box))
            if not survivors:
                raise InconsistentBranchException(
                    f"no real solution of the basis over w in {enclosure.interval}"
                )
            branches = [branch for branch, _ in survivors]
            signature = sorted(
                tuple((index, source[0], source[1] if source[0] == "root" else 0)
                      for index, source in sorted(b.items(), key=lambda kv: kv[0]))
                for b in branches
            )
            settled = all(box is not None for _, box in survivors)
            if settled and signature == previous and all(
                value.width <= eps for _, box in survivors for value in box[:-1]
            ):
                return [
                    SolutionEnclosure(
                        omega=enclosure,
                        coefficients=tuple(box[:-1]),
                        variables=basis.variables
                    )
                    for _, box in survivors
                ]
            previous = signature if settled else None

        raise InconsistentBranchException(
            f"back-substitution over w in {enclosure.interval} did not settle in {max_rounds} rounds"
        )

    def back_substitute(
        self,
        basis: GroebnerBasis,
        omega: RootEnclosure,
        eps: Union[Fraction, int],
        univariate: Optional[UniPoly] = None
    ) -> SolutionEnclosure:
        """The solution over omega; the first branch when several exist"""
        branches = self.back_substitute_branches(basis, omega, eps, univariate)
        if len(branches) > 1:
            logger.warning(f"{len(branches)} solutions lie over w in {omega.interval}; keeping the first")
        return branches[0]


# Global instance
realroots_manager = RealRootManager()
