import math

import numpy as np
import pytest

from jacobilab import polycore
from jacobilab.conjugacy import riesz
from jacobilab.params import ParamPair, uniform_params
from jacobilab.quadrature import grid_for_expansion
from jacobilab.spectral import BasisMismatchError, Expansion, lambda_mode, modes_of
from jacobilab.squarefn import (
    g_function,
    g_function_quadrature,
    g_function_result,
    g_tilde,
    g_tilde_quadrature,
    probe_operator_norm,
    verify_domination,
    verify_energy_identity,
)


def random_expansion(params, N, rng, shift=None):
    return Expansion(
        params,
        N=N,
        coeffs={k: float(rng.standard_normal()) for k in modes_of(params.d, N)},
        shift=shift,
    )


def lattice(d, n):
    axis = np.linspace(-0.9, 0.9, n)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def test_constant_has_zero_g():
    params = uniform_params(2, 0.0, 0.0)
    one = Expansion.single_mode(params, (0, 0))
    pts = lattice(2, 4)
    assert np.all(g_function(one, pts) == 0.0)


def test_single_mode_closed_form():
    # One mode: g^2 = [lam P^2 + (weighted derivative)^2] / (4 lam).
    params = uniform_params(1, 0.5, 1.0)
    k = 3
    f = Expansion.single_mode(params, (k,), N=3)
    x = 0.4
    lam = lambda_mode(params, (k,))
    pair = ParamPair(0.5, 1.0)
    P = polycore.eval_jacobi(pair, k, x)
    dP = polycore.eval_jacobi_derivative(pair, k, x)
    phi = math.sqrt(1.0 - x * x)
    want = math.sqrt((lam * P * P + (phi * dP) ** 2) / (4.0 * lam))
    got = g_function(f, np.array([[x]]))[0]
    assert abs(got - want) <= 1e-14


def test_vertical_bounded_by_full():
    rng = np.random.default_rng(31)
    params = uniform_params(2, 0.0, 0.5)
    f = random_expansion(params, 5, rng)
    pts = lattice(2, 6)
    assert np.all(g_function(f, pts, "vertical") <= g_function(f, pts, "full") + 1e-14)


def test_closed_form_vs_time_quadrature():
    rng = np.random.default_rng(32)
    params = uniform_params(2, 0.25, 0.0)
    f = random_expansion(params, 5, rng)
    pts = lattice(2, 5)
    result = g_function_result(f, pts)
    assert result.passed
    assert result.cross_residual <= 1e-7
    vertical = np.max(
        np.abs(g_function(f, pts, "vertical") - g_function_quadrature(f, pts, "vertical"))
    )
    assert vertical <= 1e-7


def test_g_tilde_positive_modes():
    # The shifted constant has raised-index eigenvalue > 0, so its square
    # function is strictly positive.
    params = uniform_params(1, 0.0, 0.0)
    f = Expansion.single_mode(params, (0,), shift=1)
    pts = lattice(1, 5)
    vals = g_tilde(1, f, pts)
    assert np.all(vals > 0.0)
    lam = lambda_mode(params, (1,))
    x = pts[2, 0]
    phi = math.sqrt(1.0 - x * x)
    want = math.sqrt(lam * phi * phi / (4.0 * lam))
    assert abs(vals[2] - want) <= 1e-14


def test_g_tilde_zero_iff_zero():
    params = uniform_params(1, 0.5, 0.0)
    zero = Expansion(params, N=2, coeffs={}, shift=1)
    pts = lattice(1, 3)
    assert np.all(g_tilde(1, zero, pts) == 0.0)
    # Nonzero truncated inputs have nonzero output: every modified
    # eigenvalue is positive, so no mode can hide.
    rng = np.random.default_rng(36)
    for _ in range(5):
        f = random_expansion(uniform_params(2, 0.0, 0.5), 3, rng, shift=1)
        scale = max(abs(v) for v in f.coeffs.values())
        assert float(np.max(g_tilde(1, f, lattice(2, 7)))) > 1e-8 * scale


def test_g_positive_on_mean_free_inputs():
    # The lower bound of the two-sided inequality holds for mean-zero
    # inputs; no constant exists to assert, but nondegeneracy does.
    rng = np.random.default_rng(37)
    params = uniform_params(1, 0.0, 0.0)
    for _ in range(5):
        f = random_expansion(params, 4, rng)
        coeffs = dict(f.coeffs)
        coeffs[(0,)] = 0.0
        f = Expansion(params, N=4, coeffs=coeffs)
        scale = max(abs(v) for v in f.coeffs.values())
        assert float(np.max(g_function(f, lattice(1, 9)))) > 1e-8 * scale


def test_g_tilde_quadrature_cross_check():
    rng = np.random.default_rng(33)
    params = uniform_params(2, 0.0, 0.0)
    f = random_expansion(params, 4, rng, shift=2)
    pts = lattice(2, 4)
    a = g_tilde(2, f, pts)
    b = g_tilde_quadrature(2, f, pts)
    assert np.max(np.abs(a - b)) <= 1e-7


def test_domination_random_corpus():
    rng = np.random.default_rng(34)
    for d in (1, 2, 3):
        params = uniform_params(d, 0.0, 0.0)
        pts = lattice(d, 7 if d <= 2 else 4)
        for _ in range(4):
            f = random_expansion(params, 4, rng)
            report = verify_domination(f, pts)
            assert report.passed, report.violations[:3]


def test_domination_single_mode_matches_derivative_part():
    # For one mode in one dimension the i-part of the full square function
    # is exactly the modified square function of the Riesz transform.
    params = uniform_params(1, 0.0, 0.0)
    f = Expansion.single_mode(params, (2,), N=2)
    pts = lattice(1, 7)
    gt = g_tilde(1, riesz(1, f), pts)
    full = g_function(f, pts, "full")
    vertical = g_function(f, pts, "vertical")
    derivative_part = np.sqrt(np.maximum(full**2 - vertical**2, 0.0))
    assert np.max(np.abs(gt - derivative_part)) <= 1e-13
    assert np.all(gt <= full + 1e-15)


def test_energy_identity_degree_one():
    params = uniform_params(1, 0.0, 0.0)
    f = Expansion.single_mode(params, (1,), N=1)
    report = verify_energy_identity(f, grid_for_expansion(params, 1))
    assert abs(report.lhs - 2.0 / 3.0) < 1e-12
    assert abs(report.rhs - 2.0 / 3.0) < 1e-15


def test_energy_identity_random_nonnegative():
    rng = np.random.default_rng(35)
    params = uniform_params(2, 0.0, 0.5)
    grid = grid_for_expansion(params, 4)
    from jacobilab.spectral import synthesize_grid

    f = random_expansion(params, 4, rng)
    low = float(np.min(synthesize_grid(f, grid.axes())))
    coeffs = dict(f.coeffs)
    coeffs[(0, 0)] = coeffs.get((0, 0), 0.0) - low + 0.1
    f = Expansion(params, N=4, coeffs=coeffs)
    report = verify_energy_identity(f, grid)
    assert report.relative_error <= 1e-8


def test_energy_constant_both_sides_zero():
    params = uniform_params(1, 0.0, 0.0)
    one = Expansion.single_mode(params, (0,))
    report = verify_energy_identity(one, grid_for_expansion(params, 1))
    assert report.lhs == 0.0 and report.rhs == 0.0


def test_probe_contraction_poisson_heat():
    for op in ("poisson", "heat"):
        for p in (1.5, 2.0, 4.0):
            report = probe_operator_norm(op, p, 2, 4, 15, 42, t=0.5)
            assert report.best_ratio <= 1.0 + 1e-10


def test_probe_riesz_l2_bounded_by_one():
    for d in (1, 2, 3):
        report = probe_operator_norm("riesz-1", 2.0, d, 4, 15, 42)
        assert report.best_ratio <= 1.0 + 1e-10


def test_probe_deterministic():
    a = probe_operator_norm("riesz-1", 4.0, 2, 4, 10, 42)
    b = probe_operator_norm("riesz-1", 4.0, 2, 4, 10, 42)
    assert a.best_ratio == b.best_ratio
    c = probe_operator_norm("riesz-1", 4.0, 2, 4, 10, 43)
    assert c.best_ratio != a.best_ratio


def test_probe_riesz_vec_exploratory():
    report = probe_operator_norm("riesz-vec", 2.0, 2, 4, 10, 42)
    assert report.best_ratio <= 1.0 + 1e-10
    assert math.isfinite(report.best_ratio)


def test_probe_conjugate_poisson():
    report = probe_operator_norm("conjugate-poisson-1", 2.0, 2, 4, 10, 42, t=0.5)
    assert report.best_ratio <= 1.0 + 1e-10


def test_probe_rejects_bad_p():
    with pytest.raises(ValueError):
        probe_operator_norm("poisson", 0.5, 1, 3, 5, 42)
    with pytest.raises(ValueError):
        probe_operator_norm("poisson", math.inf, 1, 3, 5, 42)
    with pytest.raises(ValueError):
        probe_operator_norm("spin", 2.0, 1, 3, 5, 42)


def test_basis_guards():
    params = uniform_params(1, 0.0, 0.0)
    shifted = Expansion.single_mode(params, (1,), shift=1)
    plain = Expansion.single_mode(params, (1,))
    with pytest.raises(BasisMismatchError):
        g_function(shifted, np.array([[0.0]]))
    with pytest.raises(BasisMismatchError):
        g_tilde(1, plain, np.array([[0.0]]))
