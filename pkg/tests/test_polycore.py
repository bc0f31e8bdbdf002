import math

import numpy as np
import pytest

from jacobilab import polycore
from jacobilab.exactalg import jacobi_exact, uniform_rational_params
from jacobilab.exactalg.phipoly import RationalParamVector
from jacobilab.params import ParamPair, ParameterError
from jacobilab.quadrature import gauss_jacobi
from fractions import Fraction

HALF_STEPS = (-0.5, 0.0, 0.5, 1.0, 1.5)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        ParamPair(-1.0, 0.0)
    with pytest.raises(ParameterError):
        ParamPair(0.0, -1.5)
    assert ParamPair(-0.5, 0.0).in_half_range
    assert not ParamPair(-0.75, 0.0).in_half_range


def test_degree_zero_is_constant_one():
    assert polycore.eval_jacobi(ParamPair(0.0, 0.0), 0, 0.3) == 1.0


def test_degree_one_closed_form():
    # Rodrigues at k=1 gives ((alpha+beta+2)x + (alpha-beta))/2; at (0,0) that is x.
    assert polycore.eval_jacobi(ParamPair(0.0, 0.0), 1, 0.5) == 0.5


def test_chebyshev_case_is_cosine_multiple():
    # At (-1/2,-1/2) the degree-3 polynomial is proportional to cos(3 theta).
    p = ParamPair(-0.5, -0.5)
    r1 = polycore.eval_jacobi(p, 3, math.cos(math.pi / 4)) / math.cos(3 * math.pi / 4)
    r2 = polycore.eval_jacobi(p, 3, math.cos(math.pi / 3)) / math.cos(3 * math.pi / 3)
    assert abs(r1 - r2) < 1e-14


def test_half_parameters_are_sine_multiples():
    # At (1/2,1/2) degree k is proportional to sin((k+1) theta) / sin(theta).
    p = ParamPair(0.5, 0.5)
    k = 4

    def ratio(theta):
        return polycore.eval_jacobi(p, k, math.cos(theta)) * math.sin(theta) / math.sin(
            (k + 1) * theta
        )

    assert abs(ratio(math.pi / 4) - ratio(math.pi / 3)) < 1e-13


def test_growth_estimate_diagnostic():
    # Sanity diagnostic only: sup|P_k| over an interior grid, scaled by
    # (k+1)^(alpha+beta+2), must not trend upward; no constant is asserted.
    pair = ParamPair(1.0, 1.5)
    xs = np.linspace(-0.999, 0.999, 501)
    ratios = []
    for k in range(1, 21):
        sup = float(np.max(np.abs(polycore.eval_jacobi(pair, k, xs))))
        ratios.append(sup / (k + 1) ** (pair.alpha + pair.beta + 2.0))
    assert max(ratios[10:]) <= max(ratios[:10])


def test_domain_error():
    with pytest.raises(polycore.DomainError):
        polycore.eval_jacobi(ParamPair(0.0, 0.0), 2, 1.0)
    with pytest.raises(polycore.DomainError):
        polycore.eval_jacobi(ParamPair(0.0, 0.0), 2, np.array([0.0, -1.2]))


def test_recurrence_matches_symbolic_rodrigues():
    # Rational grid points so the oracle side evaluates exactly; the float
    # monomial form of a degree-20 polynomial cancels catastrophically.
    xs = [Fraction(j, 21) for j in range(-20, 21)]
    xs_float = np.array([float(x) for x in xs])
    for a in HALF_STEPS:
        for b in HALF_STEPS:
            params = RationalParamVector(
                (Fraction(a).limit_denominator(2),),
                (Fraction(b).limit_denominator(2),),
            )
            pair = ParamPair(a, b)
            for k in range(21):
                exact = jacobi_exact(params, k, cap=21)
                want = np.array([float(exact.evaluate_exact((x,))) for x in xs])
                got = polycore.eval_jacobi(pair, k, xs_float)
                scale = np.max(np.abs(want)) or 1.0
                assert np.max(np.abs(got - want)) <= 1e-12 * scale, (a, b, k)


def test_derivative_examples():
    assert polycore.eval_jacobi_derivative(ParamPair(0.0, 0.0), 0, 0.77) == 0.0
    # d/dx of the degree-one polynomial x at (0,0) is 1.
    assert polycore.eval_jacobi_derivative(ParamPair(0.0, 0.0), 1, 0.2) == 1.0


def test_derivative_matches_central_difference():
    # Truncation error of the central difference grows like k^4 h^2; degree
    # six is where it still sits below 1e-7 on |x| <= 0.9.
    h = 1e-5
    xs = np.linspace(-0.9, 0.9, 19)
    for a, b in ((1.0, 1.0), (0.0, 0.5), (-0.5, 1.5)):
        pair = ParamPair(a, b)
        for k in (2, 3, 5, 6):
            fd = (polycore.eval_jacobi(pair, k, xs + h) - polycore.eval_jacobi(pair, k, xs - h)) / (2 * h)
            got = polycore.eval_jacobi_derivative(pair, k, xs)
            assert np.max(np.abs(got - fd)) < 1e-7


def test_derivative_at_zero_degree_two():
    pair = ParamPair(1.0, 1.0)
    h = 1e-5
    fd = (polycore.eval_jacobi(pair, 2, h) - polycore.eval_jacobi(pair, 2, -h)) / (2 * h)
    assert abs(polycore.eval_jacobi_derivative(pair, 2, 0.0) - fd) < 1e-8


def test_eigenvalues():
    assert polycore.eigenvalue(ParamPair(0.0, 0.0), 2).lam == 6.0
    assert polycore.eigenvalue(ParamPair(1.5, -0.5), 0).lam == 0.0
    mode = polycore.eigenvalue(ParamPair(-0.5, -0.5), 5)
    assert mode.lam == 25.0
    assert abs(mode.sqrt_lam**2 - mode.lam) <= 1e-14 * mode.lam


def test_eigenvalue_matches_symbolic_operator():
    # The symbolic operator applied to the degree-5 polynomial reads off 25.
    from jacobilab.exactalg import apply_jacobi_operator

    params = uniform_rational_params(1, Fraction(-1, 2), Fraction(-1, 2))
    poly = jacobi_exact(params, 5)
    assert (apply_jacobi_operator(params, poly) - poly.scale(Fraction(25))).is_zero()


def test_squared_norm_examples():
    assert abs(polycore.squared_norm(ParamPair(0.0, 0.0), 0) - 2.0) < 1e-14
    assert abs(polycore.squared_norm(ParamPair(0.0, 0.0), 1) - 2.0 / 3.0) < 1e-14
    assert abs(polycore.squared_norm(ParamPair(1.0, 0.0), 0) - 2.0) < 1e-13


def test_squared_norm_large_degree_no_overflow():
    value = polycore.squared_norm(ParamPair(0.5, 1.5), 400)
    assert 0.0 < value < 1.0


def test_squared_norm_matches_quadrature():
    for a, b in ((0.0, 0.0), (-0.5, 1.0), (1.5, 0.5)):
        pair = ParamPair(a, b)
        rule = gauss_jacobi(pair, 40)
        for k in range(16):
            vals = polycore.eval_jacobi(pair, k, rule.nodes)
            quad = float(np.sum(rule.weights * vals * vals))
            want = polycore.squared_norm(pair, k)
            assert abs(quad - want) <= 1e-10 * want


def test_orthogonality():
    for a, b in ((0.0, 0.0), (0.5, 1.5)):
        pair = ParamPair(a, b)
        rule = gauss_jacobi(pair, 40)
        table = polycore.eval_jacobi_table(pair, 15, rule.nodes)
        for j in range(16):
            for k in range(j + 1, 16):
                inner = float(np.sum(rule.weights * table[j] * table[k]))
                scale = math.sqrt(
                    polycore.squared_norm(pair, j) * polycore.squared_norm(pair, k)
                )
                assert abs(inner) <= 1e-12 * scale


def test_phi():
    assert polycore.phi(0.0) == 1.0
    assert polycore.phi(1.0) == 0.0
    assert polycore.phi(-1.0) == 0.0
    assert abs(polycore.phi(0.6) - 0.8) < 1e-15
    with pytest.raises(polycore.DomainError):
        polycore.phi(1.2)
