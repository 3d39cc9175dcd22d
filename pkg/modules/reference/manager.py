import logging
from fractions import Fraction
from typing import Any, Callable, Optional, Tuple, Union

import mpmath
import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import bisect

from shared.response import IntegrationException, ValidationException
from shared.settings import settings
from .models import PeriodMethod, PeriodResult, Trajectory

logger = logging.getLogger(__name__)

Real = Union[int, float, str, Fraction, mpmath.mpf]


def to_mpf(value: Real) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def _positive(value: Real, name: str) -> mpmath.mpf:
    converted = to_mpf(value)
    if not converted > 0:
        raise ValidationException([f"{name} must be positive, got {value}"])
    return converted


class ReferenceManager:
    """Ground-truth periods and trajectories of the singular and regularized oscillators"""

    # Weak solution

    def exact_period(self, amplitude: Real) -> PeriodResult:
        """T(A) = 2 sqrt(2 pi) A"""
        with mpmath.workdps(settings.quadrature_dps):
            a = _positive(amplitude, "amplitude")
            value = 2 * mpmath.sqrt(2 * mpmath.pi) * a
        return PeriodResult(value=value, method=PeriodMethod.CLOSED_FORM, estimated_error=0.0, amplitude=float(a))

    @staticmethod
    def erf(z: Real) -> mpmath.mpf:
        return mpmath.erf(to_mpf(z))

    @staticmethod
    def erf_inv(u: Real) -> mpmath.mpf:
        value = to_mpf(u)
        if abs(value) >= 1:
            raise ValidationException([f"erf_inv is defined on (-1, 1), got {u}"])
        return mpmath.erfinv(value)

    def _branch(self, t: Real, amplitude: mpmath.mpf) -> Tuple[int, mpmath.mpf, mpmath.mpf]:
        """(sign, offset from the branch centre, half-width) for the periodic weak solution"""
        half = mpmath.sqrt(2 * mpmath.pi) * amplitude / 2
        period = 4 * half
        s = to_mpf(t) % period
        n = int(mpmath.floor((s + half) / (2 * half)))
        tau = s - 2 * half * n
        return (-1) ** n, tau, half

    def weak_solution(self, t: Real, amplitude: Real) -> mpmath.mpf:
        """phi(t): A exp(-erfinv(2 tau / (sqrt(2 pi) A))^2) on each branch, sign alternating"""
        with mpmath.workdps(settings.quadrature_dps):
            a = _positive(amplitude, "amplitude")
            sign, tau, half = self._branch(t, a)
            ratio = tau / half
            if abs(ratio) >= 1:
                return mpmath.mpf(0)
            return sign * a * mpmath.exp(-mpmath.erfinv(ratio) ** 2)

    def weak_velocity(self, t: Real, amplitude: Real) -> mpmath.mpf:
        """y(t) = -sqrt(2) erfinv(2 tau / (sqrt(2 pi) A)) with the branch sign; infinite at the zeros of phi"""
        with mpmath.workdps(settings.quadrature_dps):
            a = _positive(amplitude, "amplitude")
            sign, tau, half = self._branch(t, a)
            ratio = tau / half
            if abs(ratio) >= 1:
                return -sign * mpmath.sign(ratio) * mpmath.inf
            return -sign * mpmath.sqrt(2) * mpmath.erfinv(ratio)

    @staticmethod
    def format(value: mpmath.mpf, digits: int) -> str:
        return mpmath.nstr(value, digits)

    @staticmethod
    def singular_orbit(y: Any, amplitude: Real) -> Any:
        """x = A exp(-y^2 / 2), the orbit of the unregularized flow"""
        return float(to_mpf(amplitude)) * np.exp(-np.asarray(y, dtype=float) ** 2 / 2)

    @staticmethod
    def energy(x: Any, y: Any, k: Real) -> Any:
        """H(x, y) = y^2/2 + ln(x^2 + k^2)/2"""
        k = float(to_mpf(k))
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return y ** 2 / 2 + np.log(x ** 2 + k ** 2) / 2

    # Quadrature

    def _quadrature(self, integrand: Callable, scale: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
        value, error = mpmath.quad(integrand, [0, 1], method="tanh-sinh", error=True)
        return scale * value, scale * error

    def regularized_period_quadrature(
        self,
        amplitude: Real,
        k: Real,
        dps: Optional[int] = None
    ) -> PeriodResult:
        """T(A; k) = 4 A int_0^1 ds / sqrt(ln((A^2 + k^2) / (A^2 s^2 + k^2)))"""
        with mpmath.workdps(dps or settings.quadrature_dps):
            a = _positive(amplitude, "amplitude")
            kk = to_mpf(k)
            if not kk > 0:
                raise ValidationException([f"k must be positive, got {k}; use the exact period for k = 0"])
            a2, k2 = a * a, kk * kk

            def integrand(s):
                return 1 / mpmath.sqrt(mpmath.log1p(a2 * (1 - s * s) / (a2 * s * s + k2)))

            value, error = self._quadrature(integrand, 4 * a)
        if error > settings.quadrature_tolerance * value:
            logger.warning(f"Quadrature error estimate {mpmath.nstr(error, 3)} for A={a}, k={kk}")
        logger.debug(f"T(A={mpmath.nstr(a, 8)}; k={mpmath.nstr(kk, 8)}) = {mpmath.nstr(value, 15)}")
        return PeriodResult(
            value=value, method=PeriodMethod.QUADRATURE,
            estimated_error=float(error), amplitude=float(a), k=float(kk)
        )

    def singular_limit_quadrature(self, amplitude: Real = 1, dps: Optional[int] = None) -> PeriodResult:
        """4 A int_0^1 ds / sqrt(-2 ln s); equals the exact period 2 sqrt(2 pi) A"""
        with mpmath.workdps(dps or settings.quadrature_dps):
            a = _positive(amplitude, "amplitude")
            value, error = self._quadrature(lambda s: 1 / mpmath.sqrt(-2 * mpmath.log(s)), 4 * a)
        return PeriodResult(
            value=value, method=PeriodMethod.QUADRATURE,
            estimated_error=float(error), amplitude=float(a), k=0.0
        )

    # Regularized flow

    @staticmethod
    def _vector_field(k: float) -> Callable:
        k2 = k * k

        def rhs(t, state):
            x, y = state
            return [y, -x / (x * x + k2)]

        return rhs

    def simulate_regularized(
        self,
        amplitude: Real,
        k: Real,
        t_max: Real,
        rtol: Optional[float] = None,
        atol: Optional[float] = None,
        samples: Optional[int] = None
    ) -> Trajectory:
        """DOP853 trajectory from (A, 0); accepted steps, or `samples` equally spaced points"""
        a = float(_positive(amplitude, "amplitude"))
        kk = float(_positive(k, "k"))
        t_end = float(_positive(t_max, "t_max"))
        rtol = rtol or settings.ode_rtol
        atol = atol or settings.ode_atol

        result = solve_ivp(
            self._vector_field(kk), (0.0, t_end), [a, 0.0],
            method="DOP853", rtol=rtol, atol=atol, dense_output=True
        )
        if result.status < 0:
            raise IntegrationException(
                f"integration failed at A={a}, k={kk}: {result.message}",
                details={"t_reached": float(result.t[-1]) if len(result.t) else 0.0}
            )

        if samples:
            t = np.linspace(0.0, t_end, samples)
            x, y = result.sol(t)
        else:
            t, (x, y) = result.t, result.y
        h0 = float(self.energy(a, 0.0, kk))
        drift = float(np.max(np.abs(self.energy(result.y[0], result.y[1], kk) - h0)))
        if drift > settings.energy_tolerance:
            logger.warning(f"Energy drift {drift:.3e} exceeds {settings.energy_tolerance:.1e} (A={a}, k={kk})")
        logger.debug(f"Integrated A={a}, k={kk} to t={t_end} in {len(result.t)} steps")
        return Trajectory(
            amplitude=a, k=kk, t=np.asarray(t), x=np.asarray(x), y=np.asarray(y),
            energy_drift=drift, steps=len(result.t), dense=result.sol
        )

    def _first_crossing(
        self,
        amplitude: float,
        k: float,
        component: int,
        guard: Callable[[np.ndarray], bool]
    ) -> Tuple[float, Trajectory]:
        """First time the component falls from > 0 to <= 0 while guard holds"""
        t_end = 1.25 * max(2 * np.sqrt(2 * np.pi) * amplitude, 2 * np.pi * np.hypot(amplitude, k))
        for _ in range(8):
            trajectory = self.simulate_regularized(amplitude, k, t_end)
            values = trajectory.x if component == 0 else trajectory.y
            for i in range(1, len(trajectory.t)):
                if values[i - 1] > 0 >= values[i]:
                    state = trajectory.dense(trajectory.t[i])
                    if not guard(state):
                        continue
                    if values[i] == 0:
                        return float(trajectory.t[i]), trajectory
                    crossing = bisect(
                        lambda s: trajectory.dense(s)[component],
                        trajectory.t[i - 1], trajectory.t[i],
                        xtol=settings.event_tolerance
                    )
                    return float(crossing), trajectory
            t_end *= 2
            logger.debug(f"No crossing yet; extending the horizon to {t_end:.3f}")
        raise IntegrationException(f"no section crossing found for A={amplitude}, k={k}")

    def regularized_period_ode(self, amplitude: Real, k: Real) -> PeriodResult:
        """First return to {y = 0, x > 0}"""
        a = float(_positive(amplitude, "amplitude"))
        kk = float(_positive(k, "k"))
        period, trajectory = self._first_crossing(a, kk, 1, lambda state: state[0] > 0)
        return PeriodResult(
            value=mpmath.mpf(period), method=PeriodMethod.ODE,
            estimated_error=settings.event_tolerance + settings.ode_rtol * period,
            amplitude=a, k=kk
        )

    def quarter_period_ode(self, amplitude: Real, k: Real) -> PeriodResult:
        """Time from (A, 0) to the first x = 0 crossing"""
        a = float(_positive(amplitude, "amplitude"))
        kk = float(_positive(k, "k"))
        quarter, _ = self._first_crossing(a, kk, 0, lambda state: True)
        return PeriodResult(
            value=mpmath.mpf(quarter), method=PeriodMethod.ODE,
            estimated_error=settings.event_tolerance + settings.ode_rtol * quarter,
            amplitude=a, k=kk
        )


# Global instance
reference_manager = ReferenceManager()
