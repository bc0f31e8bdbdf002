"""Verification suites behind the verify command and the acceptance tests.

Five suites: exact (the zero-tolerance symbolic identity corpus), numeric
(spectral identities, subordination, contraction probes at the coefficient
and quadrature level), kernels (the pointwise kernel comparison and its
out-of-range failure), energy, and domination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import conjugacy as conj
from . import polycore
from . import spectral as sp
from . import squarefn as sq
from .exactalg import IDENTITY_IDS, RationalParamVector, verify_identity
from .params import ParamVector, uniform_params
from .quadrature import gauss_jacobi, grid_for_expansion, lp_norm
from .spectral import Expansion, modes_of


@dataclass
class CheckRecord:
    name: str
    passed: bool
    value: float | None = None
    threshold: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class SuiteResult:
    suite: str
    checks: list[CheckRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, value=None, threshold=None, detail=""):
        self.checks.append(
            CheckRecord(
                name=name,
                passed=bool(passed),
                value=None if value is None else float(value),
                threshold=threshold,
                detail=detail,
            )
        )

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
        }


# -- exact suite ----------------------------------------------------------

HALF_STEPS = (Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2))


def exact_corpus(dims=(1, 2, 3)) -> list[RationalParamVector]:
    """Parameter vectors exercising every value of the half-step set.

    The one-dimensional slice takes the full 25-pair cross product; higher
    dimensions use fixed mixed vectors (the full cross product grows as
    5^(2d) and adds nothing to coverage)."""
    corpus = []
    if 1 in dims:
        for a in HALF_STEPS:
            for b in HALF_STEPS:
                corpus.append(RationalParamVector((a,), (b,)))
    if 2 in dims:
        h = HALF_STEPS
        corpus += [
            RationalParamVector((h[0], h[1]), (h[2], h[4])),
            RationalParamVector((h[3], h[2]), (h[1], h[0])),
            RationalParamVector((h[4], h[4]), (h[4], h[4])),
            RationalParamVector((h[1], h[1]), (h[1], h[1])),
            RationalParamVector((h[0], h[0]), (h[0], h[0])),
        ]
    if 3 in dims:
        h = HALF_STEPS
        corpus += [
            RationalParamVector((h[0], h[2], h[4]), (h[1], h[3], h[0])),
            RationalParamVector((h[1], h[1], h[1]), (h[1], h[1], h[1])),
            RationalParamVector((h[3], h[0], h[2]), (h[4], h[2], h[1])),
        ]
    return corpus


def run_exact_suite(cap: int = 4, dims=(1, 2, 3)) -> SuiteResult:
    result = SuiteResult(suite="exact", config={"cap": cap, "dims": list(dims)})
    for params in exact_corpus(dims):
        label = f"d={params.d} a={[str(a) for a in params.alpha]} b={[str(b) for b in params.beta]}"
        for name in IDENTITY_IDS:
            report = verify_identity(name, params, cap)
            failures = [r for r in report.results if r.status == "FAIL"]
            detail = failures[0].residual_terms[0][:160] if failures else report.note
            result.add(
                f"{name} {label}",
                not failures,
                value=len(failures),
                threshold=0.0,
                detail=detail,
            )
    return result


# -- numeric suite --------------------------------------------------------


def _random_expansion(params: ParamVector, N: int, rng) -> Expansion:
    draw = {k: float(rng.standard_normal()) for k in modes_of(params.d, N)}
    return Expansion(params=params, N=N, coeffs=draw)


def _l2_sq(f: Expansion) -> float:
    total = 0.0
    for k, v in f.coeffs.items():
        h = 1.0
        for i, ki in enumerate(k, start=1):
            pair = f.params.pair(i)
            if f.shift == i:
                pair = pair.shifted()
            h *= polycore.squared_norm(pair, ki)
        total += v * v * h
    return total


def _lattice(d: int, n: int) -> np.ndarray:
    axis = np.linspace(-0.9, 0.9, n)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def riesz_isometry_residual(f: Expansion) -> float:
    """Relative defect of sum_i ||R_i f||^2 = ||Pi_0 f||^2."""
    lhs = sum(_l2_sq(conj.riesz(i, f)) for i in range(1, f.d + 1))
    rhs = _l2_sq(sp.project_pi0(f))
    if rhs == 0.0:
        return abs(lhs)
    return abs(lhs - rhs) / rhs


def riesz_inversion_residual(f: Expansion) -> float:
    """Coefficient defect of sum_j adjoint(R_j) R_j = Pi_0."""
    total: dict = {}
    for j in range(1, f.d + 1):
        back = conj.riesz_adjoint(j, conj.riesz(j, f))
        for k, v in back.coeffs.items():
            total[k] = total.get(k, 0.0) + v
    target = sp.project_pi0(f)
    worst = 0.0
    for k in set(total) | set(target.coeffs):
        worst = max(worst, abs(total.get(k, 0.0) - target.coeffs.get(k, 0.0)))
    return worst


def conjugate_l2_bound_residual(f: Expansion, t: float) -> float:
    """Excess of sum_i ||U_t^i f||^2 over ||Pi_0 f||^2 (should be <= 0)."""
    lhs = sum(_l2_sq(conj.conjugate_poisson(i, t, f)) for i in range(1, f.d + 1))
    return lhs - _l2_sq(sp.project_pi0(f))


def run_numeric_suite(
    seed: int = 2024,
    dims=(1, 2),
    t_values=(0.25, 1.0),
    N: int = 5,
    samples: int = 25,
) -> SuiteResult:
    result = SuiteResult(
        suite="numeric",
        config={
            "seed": seed,
            "dims": list(dims),
            "t": list(t_values),
            "N": N,
            "samples": samples,
        },
    )
    rng = np.random.default_rng(seed)

    # Cauchy-Riemann scheme residuals on band-limited inputs.
    for d in dims:
        params = uniform_params(d, 0.0, 0.5)
        f = _random_expansion(params, N, rng)
        pts = _lattice(d, 9 if d <= 2 else 5)
        for t in t_values:
            report = conj.verify_cauchy_riemann(f, float(t), pts)
            for r in report.residuals:
                threshold = 1e-13 if r.equation == "hh4" else 1e-8
                result.add(
                    f"{r.equation} d={d} t={t}",
                    r.max_residual <= threshold,
                    value=r.max_residual,
                    threshold=threshold,
                )

    # Riesz isometry across the full parameter range, including below the
    # half-range threshold.
    for d in (1, 2, 3, 4):
        for alpha, beta in ((0.0, 0.0), (-0.75, -0.75), (1.5, 0.25)):
            params = uniform_params(d, alpha, beta)
            worst = max(
                riesz_isometry_residual(_random_expansion(params, 6, rng))
                for _ in range(samples)
            )
            result.add(
                f"riesz-isometry d={d} a=b={alpha}",
                worst <= 1e-12,
                value=worst,
                threshold=1e-12,
            )

    # Composition of the Riesz transform with its adjoint recovers the
    # mean-free projection, coefficient by coefficient.
    for d in (1, 2, 3, 4):
        params = uniform_params(d, 0.5, 0.0)
        worst = max(
            riesz_inversion_residual(_random_expansion(params, 6, rng))
            for _ in range(samples)
        )
        result.add(
            f"riesz-inversion d={d}", worst <= 1e-14, value=worst, threshold=1e-14
        )

    # Conjugate Poisson L2 bound.
    for d in dims:
        params = uniform_params(d, 0.0, 0.0)
        worst = max(
            conjugate_l2_bound_residual(_random_expansion(params, N, rng), 0.5)
            for _ in range(samples)
        )
        result.add(
            f"conjugate-l2-bound d={d}", worst <= 1e-10, value=worst, threshold=1e-10
        )

    # Subordination bridge against the spectral Poisson integral.
    for d in (1, 2):
        params = uniform_params(d, 0.25, 0.75)
        worst = 0.0
        for _ in range(10):
            f = _random_expansion(params, 4, rng)
            x = rng.uniform(-0.85, 0.85, size=d)
            for t in (0.3, 1.0, 3.0):
                spectral = sp.synthesize(sp.apply_poisson(t, f), x)
                bridged = sp.subordinated_poisson(t, f, x, self_check=True)
                worst = max(worst, abs(spectral - bridged))
        result.add(
            f"subordination d={d}", worst <= 1e-8, value=worst, threshold=1e-8
        )

    # Modified Poisson semigroup: contraction inside the half range.
    for alpha, beta in ((0.0, 0.0), (-0.5, -0.5), (1.0, 2.0)):
        params = uniform_params(1, alpha, beta)
        grid = grid_for_expansion(params, N + 1)
        worst = 0.0
        for _ in range(samples):
            f = _random_expansion(params, N, rng)
            g = conj.riesz(1, f)
            for p in (1.5, 2.0, 4.0):
                before = lp_norm(sp.synthesize_grid(g, grid.axes()), p, grid)
                after = lp_norm(
                    sp.synthesize_grid(
                        sp.apply_modified(1, "poisson", 0.4, g), grid.axes()
                    ),
                    p,
                    grid,
                )
                worst = max(worst, after / before)
        result.add(
            f"modified-poisson-contraction a=b={alpha}",
            worst <= 1.0 + 1e-10,
            value=worst,
            threshold=1.0 + 1e-10,
        )

    # Outside the half range the modified heat semigroup inflates the
    # constant function for small times; the suite asserts the detection.
    low = uniform_params(1, -0.9, -0.9)
    rule = gauss_jacobi(low.pair(1), 80)
    pts = _lattice(1, 41)
    mass = sp.modified_unit_mass(
        1, 0.01, low, pts, rule.nodes.reshape(-1, 1), rule.weights, K=220
    )
    result.add(
        "modified-linf-failure a=b=-0.9",
        float(mass.max()) > 1.0 + 1e-6,
        value=float(mass.max()),
        threshold=1.0,
        detail="sup-norm mass must exceed 1 outside the half range",
    )
    half = uniform_params(1, 0.0, 0.0)
    rule_h = gauss_jacobi(half.pair(1), 80)
    mass_h = sp.modified_unit_mass(
        1, 0.01, half, pts, rule_h.nodes.reshape(-1, 1), rule_h.weights, K=220
    )
    result.add(
        "modified-linf-contraction a=b=0",
        float(mass_h.max()) <= 1.0 + 1e-8,
        value=float(mass_h.max()),
        threshold=1.0 + 1e-8,
    )
    return result


# -- kernel suite ---------------------------------------------------------


def midpoint_lattice(n: int) -> np.ndarray:
    """n strictly interior points, uniform midpoints of (-1, 1)."""
    j = np.arange(n)
    return (-1.0 + 2.0 * (j + 0.5) / n).reshape(-1, 1)


def kernel_comparison(
    alpha: float, beta: float, t: float, n_grid: int = 51, K: int = 200
) -> tuple[float, bool]:
    """Largest value of (modified kernel - heat kernel) on the lattice and
    whether both tables converged."""
    params = uniform_params(1, alpha, beta)
    pts = midpoint_lattice(n_grid)
    heat = sp.heat_kernel_table(t, params, pts, pts, K)
    modified = sp.modified_kernel_table(1, t, params, pts, pts, K)
    gap = float(np.max(modified.values - heat.values))
    return gap, heat.converged and modified.converged


def run_kernel_suite(
    t_values=(0.1, 0.5, 1.0, 2.0),
    n_grid: int = 51,
    expect_violation: bool = False,
    alpha: float | None = None,
    beta: float | None = None,
    K: int = 200,
) -> SuiteResult:
    result = SuiteResult(
        suite="kernels",
        config={
            "t": list(t_values),
            "grid": n_grid,
            "expect_violation": expect_violation,
            "alpha": alpha,
            "beta": beta,
        },
    )
    if alpha is None:
        cases = [(-0.5, -0.5), (0.0, 0.0), (1.0, 2.0)]
    else:
        cases = [(float(alpha), float(beta if beta is not None else alpha))]
    for a, b in cases:
        half = uniform_params(1, a, b).in_half_range
        regime = f"in_half_range={half}"
        found = False
        for t in t_values:
            gap, converged = kernel_comparison(a, b, float(t), n_grid, K)
            if expect_violation:
                if converged and gap > 0.0:
                    found = True
                    result.add(
                        f"kernel-violation a={a} b={b} t={t}",
                        True,
                        value=gap,
                        threshold=0.0,
                        detail=f"expected failure of the kernel inequality; {regime}",
                    )
            else:
                result.add(
                    f"kernel-inequality a={a} b={b} t={t}",
                    converged and gap <= 1e-10,
                    value=gap,
                    threshold=1e-10,
                    detail=regime if converged else f"table not converged; {regime}",
                )
        if expect_violation and not found:
            detail = "no violation found although one was expected"
            if half:
                detail += "; parameters are in the half range, where the inequality is a theorem"
            result.add(f"kernel-violation a={a} b={b}", False, detail=detail)
    return result


# -- energy suite ---------------------------------------------------------


def run_energy_suite(
    seed: int = 2025, dims=(1, 2), samples: int = 10, N: int = 5
) -> SuiteResult:
    result = SuiteResult(
        suite="energy",
        config={"seed": seed, "dims": list(dims), "samples": samples, "N": N},
    )
    rng = np.random.default_rng(seed)
    for d in dims:
        params = uniform_params(d, 0.0, 0.5)
        grid = grid_for_expansion(params, N)
        worst = 0.0
        for _ in range(samples):
            f = _random_expansion(params, N, rng)
            # Shift the mean so the sample is nonnegative on the grid.
            low = float(np.min(sp.synthesize_grid(f, grid.axes())))
            if low < 0:
                zero = (0,) * d
                coeffs = dict(f.coeffs)
                coeffs[zero] = coeffs.get(zero, 0.0) - low + 0.1
                f = Expansion(params=params, N=N, coeffs=coeffs)
            report = sq.verify_energy_identity(f, grid)
            worst = max(worst, report.relative_error)
        result.add(f"energy d={d}", worst <= 1e-8, value=worst, threshold=1e-8)
    return result


# -- domination suite -----------------------------------------------------


def run_domination_suite(
    seed: int = 2026, dims=(1, 2, 3), samples: int = 8, N: int = 4
) -> SuiteResult:
    result = SuiteResult(
        suite="domination",
        config={"seed": seed, "dims": list(dims), "samples": samples, "N": N},
    )
    rng = np.random.default_rng(seed)
    for d in dims:
        params = uniform_params(d, 0.0, 0.0)
        pts = _lattice(d, 9 if d <= 2 else 5)
        violations = 0
        worst = -math.inf
        for _ in range(samples):
            f = _random_expansion(params, N, rng)
            report = sq.verify_domination(f, pts)
            violations += len(report.violations)
            worst = max(worst, report.max_gap)
        result.add(
            f"domination d={d}",
            violations == 0,
            value=worst,
            threshold=1e-10,
            detail=f"{violations} violations",
        )
    return result


SUITES = {
    "exact": run_exact_suite,
    "numeric": run_numeric_suite,
    "kernels": run_kernel_suite,
    "energy": run_energy_suite,
    "domination": run_domination_suite,
}
