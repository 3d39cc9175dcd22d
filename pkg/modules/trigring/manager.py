import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

from shared.response import ArithmeticException, ValidationException
from modules.algebra.models import MultiPoly, RatInterval, ambient_variables
from modules.algebra.utils import content_primitive, pi_enclosure
from modules.realroots.models import SolutionEnclosure
from .models import HbmSystem, TrigPoly

logger = logging.getLogger(__name__)


class TrigRingManager:
    """Cosine-series algebra and derivation of the harmonic balance systems"""

    def build_ansatz(self, order: int, variables: Optional[Sequence[str]] = None) -> TrigPoly:
        """x_N = sum_j a_{2j-1} cos((2j-1) w t)"""
        if order < 1:
            raise ValidationException([f"order must be >= 1, got {order}"])
        variables = tuple(variables) if variables else ambient_variables(order)
        return TrigPoly(variables, {
            2 * j - 1: MultiPoly.variable(variables, j - 1) for j in range(1, order + 1)
        })

    def second_derivative(self, x: TrigPoly) -> TrigPoly:
        """d^2/dt^2 multiplies cos(j w t) by -j^2 w^2"""
        w = MultiPoly.variable(x.variables, len(x.variables) - 1)
        w_squared = w * w
        return TrigPoly(x.variables, {
            j: (c * w_squared).scale(-j * j) for j, c in x.harmonics.items() if j
        })

    def trig_mul(self, x: TrigPoly, y: TrigPoly) -> TrigPoly:
        """Product through cos(a)cos(b) = (cos(a-b) + cos(a+b)) / 2"""
        if x.variables != y.variables:
            raise ArithmeticException("ambient variable mismatch")
        half = Fraction(1, 2)
        collected: Dict[int, MultiPoly] = {}
        for a, ca in x.harmonics.items():
            for b, cb in y.harmonics.items():
                product = (ca * cb).scale(half)
                for j in (abs(a - b), a + b):
                    collected[j] = collected[j] + product if j in collected else product
        return TrigPoly(x.variables, collected)

    def trig_pow(self, x: TrigPoly, n: int) -> TrigPoly:
        if n < 0:
            raise ArithmeticException("negative power of a cosine series")
        result = TrigPoly.constant(x.variables, 1)
        base = x
        while n:
            if n & 1:
                result = self.trig_mul(result, base)
            n >>= 1
            if n:
                base = self.trig_mul(base, base)
        return result

    def residual(self, m: int, x: TrigPoly) -> TrigPoly:
        """F = x^(m+1) x'' + x^m"""
        power = self.trig_pow(x, m)
        return self.trig_mul(self.trig_mul(power, x), self.second_derivative(x)) + power

    def build_hbm_system(
        self,
        m: int,
        order: int,
        amplitude: Union[int, Fraction] = 1
    ) -> HbmSystem:
        """First `order` non-trivial Fourier conditions of F plus sum(a) - A"""
        errors = []
        if m < 0:
            errors.append(f"m must be >= 0, got {m}")
        if order < 1:
            errors.append(f"order must be >= 1, got {order}")
        amplitude = Fraction(amplitude)
        if amplitude <= 0:
            errors.append(f"amplitude must be positive, got {amplitude}")
        if errors:
            raise ValidationException(errors)

        variables = ambient_variables(order)
        x = self.build_ansatz(order, variables)
        residual = self.residual(m, x)

        selected: List[int] = []
        equations: List[MultiPoly] = []
        generators: List[MultiPoly] = []
        for j in range(residual.max_harmonic + 1):
            coefficient = residual.coefficient(j)
            if coefficient.is_zero():
                continue
            _, primitive, mono_gcd = content_primitive(coefficient)
            selected.append(j)
            equations.append(primitive)
            # drop the w power only; a1 = 0 branches must reach the admissibility filter
            generators.append(primitive.mul_term(mono_gcd[:-1] + (0,)))
            if len(selected) == order:
                break
        if len(selected) < order:
            raise ArithmeticException(
                f"only {len(selected)} non-trivial harmonics for m={m}, N={order}"
            )

        normalization = sum(
            (MultiPoly.variable(variables, i) for i in range(order)),
            MultiPoly.constant(variables, -amplitude)
        )
        equations.append(normalization)
        generators.append(normalization)
        logger.debug(f"HBM system m={m}, N={order}: harmonics {selected}")
        return HbmSystem(
            m=m,
            order=order,
            variables=variables,
            equations=tuple(equations),
            ideal_generators=tuple(generators),
            raw_coefficients=dict(residual.harmonics),
            harmonics=tuple(selected),
            residual=residual,
            amplitude=amplitude
        )

    def parseval_norm(
        self,
        residual: TrigPoly,
        solution: SolutionEnclosure,
        pi_bits: int = 256
    ) -> RatInterval:
        """(2 pi / w) (A_0^2 + 1/2 sum A_j^2), the integral of F^2 over one period"""
        box = solution.box()
        total = RatInterval.point(0)
        for j, coefficient in residual.harmonics.items():
            value = RatInterval.coerce(coefficient.evaluate(box)) ** 2
            total = total + (value if j == 0 else value * Fraction(1, 2))
        return pi_enclosure(pi_bits) * 2 / solution.omega.interval * total

    @staticmethod
    def first_order_omega_squared(m: int) -> Fraction:
        """w_1^2 = (2k+2)/(2k+1) with k = [(m+1)/2]"""
        if m < 0:
            raise ValidationException([f"m must be >= 0, got {m}"])
        k = (m + 1) // 2
        return Fraction(2 * k + 2, 2 * k + 1)


# Global instance
trigring_manager = TrigRingManager()
