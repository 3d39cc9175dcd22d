from fractions import Fraction

import numpy as np
import pytest

from shared.response import ArithmeticException, ValidationException
from modules.algebra.models import MultiPoly, RatInterval, ambient_variables, parse_polynomial
from modules.realroots.manager import realroots_manager
from modules.realroots.models import RootEnclosure, SolutionEnclosure, UniPoly
from modules.trigring.manager import trigring_manager
from modules.trigring.models import TrigPoly
from tests.conftest import proportional

V2 = ambient_variables(2)
V4 = ambient_variables(4)


def P(text, variables=V2):
    return parse_polynomial(variables, text)


def cosines(variables, harmonics):
    return TrigPoly(variables, {j: MultiPoly.constant(variables, c) for j, c in harmonics.items()})


def test_ansatz_and_second_derivative():
    x = trigring_manager.build_ansatz(1, ambient_variables(1))
    assert x.harmonics == {1: MultiPoly.variable(ambient_variables(1), 0)}
    x2 = trigring_manager.build_ansatz(2)
    assert set(x2.harmonics) == {1, 3}
    third = TrigPoly(V2, {3: P("a3")})
    assert trigring_manager.second_derivative(third) == TrigPoly(V2, {3: P("-9*a3*w^2")})


def test_ansatz_rejects_order_zero():
    with pytest.raises(ValidationException):
        trigring_manager.build_ansatz(0)


def test_product_to_sum():
    product = trigring_manager.trig_mul(cosines(V2, {1: 1}), cosines(V2, {3: 1}))
    assert product == cosines(V2, {2: Fraction(1, 2), 4: Fraction(1, 2)})
    square = trigring_manager.trig_mul(cosines(V2, {1: 1}), cosines(V2, {1: 1}))
    assert square == cosines(V2, {0: Fraction(1, 2), 2: Fraction(1, 2)})


def test_mean_of_square():
    x = trigring_manager.build_ansatz(2)
    square = trigring_manager.trig_pow(x, 2)
    assert square.coefficient(0) == P("1/2*a1^2 + 1/2*a3^2")


def test_trig_mul_commutes_and_distributes():
    x = trigring_manager.build_ansatz(2)
    y = TrigPoly(V2, {0: P("w"), 2: P("a1 - a3")})
    z = TrigPoly(V2, {1: P("a3^2"), 4: P("3")})
    assert trigring_manager.trig_mul(x, y) == trigring_manager.trig_mul(y, x)
    assert trigring_manager.trig_mul(x, y + z) == (
        trigring_manager.trig_mul(x, y) + trigring_manager.trig_mul(x, z)
    )


def test_trig_mul_ambient_mismatch():
    with pytest.raises(ArithmeticException):
        trigring_manager.trig_mul(cosines(V2, {1: 1}), cosines(V4, {1: 1}))


def test_system_order_zero_two():
    system = trigring_manager.build_hbm_system(0, 2)
    assert system.variables == ("a1", "a3", "w")
    assert system.harmonics == (0, 2)
    expected = [P("2 - a1^2*w^2 - 9*a3^2*w^2"), P("a1 + 10*a3"), P("a1 + a3 - 1")]
    for equation, reference in zip(system.equations, expected):
        assert proportional(equation, reference)
    assert system.equations[1] == P("a1 + 10*a3")
    assert system.normalization == P("a1 + a3 - 1")


def test_system_order_one_two():
    system = trigring_manager.build_hbm_system(1, 2)
    assert system.harmonics == (1, 3)
    expected = [
        P("4 - 3*a1^2*w^2 - 11*a1*a3*w^2 - 38*a3^2*w^2"),
        P("4*a3 - a1^3*w^2 - 22*a1^2*a3*w^2 - 27*a3^3*w^2"),
        P("a1 + a3 - 1"),
    ]
    for equation, reference in zip(system.equations, expected):
        assert proportional(equation, reference)


def test_system_order_zero_four_contains_sixth_harmonic_condition():
    system = trigring_manager.build_hbm_system(0, 4)
    assert system.harmonics == (0, 2, 4, 6)
    assert system.j_n == 6
    assert parse_polynomial(V4, "9*a3^2 + 50*a1*a7 + 26*a1*a5") in system.equations


def test_system_equations_are_primitive():
    for m, order in [(0, 3), (1, 2), (2, 2)]:
        system = trigring_manager.build_hbm_system(m, order)
        assert len(system.equations) == order + 1
        for equation in system.fourier_conditions:
            mono_gcd = tuple(min(t[i] for t in equation.terms) for i in range(equation.arity))
            assert not any(mono_gcd)
            assert all(c.denominator == 1 for c in equation.terms.values())


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_residual_parity(m):
    residual = trigring_manager.residual(m, trigring_manager.build_ansatz(3))
    assert all(j % 2 == m % 2 for j in residual.harmonics)


def test_system_amplitude_scaling():
    system = trigring_manager.build_hbm_system(0, 2, amplitude=Fraction(3))
    assert system.normalization == P("a1 + a3 - 3")
    with pytest.raises(ValidationException):
        trigring_manager.build_hbm_system(0, 2, amplitude=0)
    with pytest.raises(ValidationException):
        trigring_manager.build_hbm_system(-1, 2)


@pytest.mark.parametrize("m, expected", [
    (0, Fraction(2)), (1, Fraction(4, 3)), (2, Fraction(4, 3)), (3, Fraction(6, 5)), (4, Fraction(6, 5)),
])
def test_first_order_frequency(m, expected):
    assert trigring_manager.first_order_omega_squared(m) == expected


@pytest.mark.parametrize("m, order", [(m, n) for m in range(3) for n in range(1, 4)])
def test_coefficients_match_sampled_residual(m, order):
    """Symbolic Fourier coefficients agree with a discrete transform of F sampled in time"""
    rng = np.random.default_rng(1000 * m + order)
    x = trigring_manager.build_ansatz(order)
    residual = trigring_manager.residual(m, x)
    harmonics = np.array([2 * j - 1 for j in range(1, order + 1)], dtype=float)
    samples = 4 * residual.max_harmonic + 8
    for _ in range(100):
        a = rng.uniform(-1.0, 1.0, order)
        w = rng.uniform(0.5, 2.0)
        theta = 2 * np.pi * np.arange(samples) / samples
        basis = np.cos(np.outer(harmonics, theta))
        xt = a @ basis
        xdd = -(w ** 2) * ((harmonics ** 2 * a) @ basis)
        f = xt ** (m + 1) * xdd + xt ** m
        scale = max(1.0, float(np.max(np.abs(f))))
        point = list(a) + [w]
        for j in range(residual.max_harmonic + 2):
            weight = 1.0 if j == 0 else 2.0
            numeric = weight * float(np.mean(f * np.cos(j * theta)))
            symbolic = float(residual.coefficient(j).evaluate(point)) if j in residual.harmonics else 0.0
            assert abs(numeric - symbolic) <= 1e-10 * scale


def test_parseval_norm_order_one():
    omega_poly = UniPoly([-2, 0, 1])
    omega = realroots_manager.refine(
        realroots_manager.isolate_positive_roots(omega_poly)[0], omega_poly, Fraction(1, 10 ** 30)
    )
    variables = ambient_variables(1)
    residual = trigring_manager.residual(0, trigring_manager.build_ansatz(1, variables))
    at_solution = SolutionEnclosure(omega=omega, coefficients=(RatInterval.point(1),), variables=variables)
    norm = trigring_manager.parseval_norm(residual, at_solution)
    # F = -cos(2wt) at the first-order solution
    assert abs(float(norm.midpoint) - np.pi / np.sqrt(2)) < 1e-12
    assert norm.width < Fraction(1, 10 ** 20)


def test_parseval_norm_vanishes_only_at_exact_solutions():
    variables = ambient_variables(1)
    residual = trigring_manager.residual(0, trigring_manager.build_ansatz(1, variables))
    omega = RootEnclosure(RatInterval.point(1), 0, 0, exact=True)
    off = SolutionEnclosure(omega=omega, coefficients=(RatInterval.point(1),), variables=variables)
    assert trigring_manager.parseval_norm(residual, off).lo > 0
