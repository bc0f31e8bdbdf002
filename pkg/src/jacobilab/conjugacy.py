"""Riesz transforms, their adjoints, and conjugate Poisson integrals.

Everything here is an exact spectral map on truncated expansions: mode
relabeling plus scalar factors.  Quadrature never enters the operators
themselves, only inner products and grid residuals, so the identity checks
below run at machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import polycore
from .params import ParamVector
from .spectral import (
    BasisMismatchError,
    Expansion,
    apply_modified,
    apply_poisson,
    lambda_mode,
    modified_lambda,
    project_pi0,
    synthesize,
)


class UnsupportedBasisError(ValueError):
    """Requested a spectral derivative outside the two diagonal cases."""


def _sub(k, i):
    out = list(k)
    out[i - 1] -= 1
    return tuple(out)


def _add(k, i):
    out = list(k)
    out[i - 1] += 1
    return tuple(out)


def riesz(i: int, f: Expansion) -> Expansion:
    """The i-th Riesz transform: standard mode k maps to shifted-i mode
    k - e_i with factor (k_i + alpha_i + beta_i + 1) / (2 sqrt(lam_k));
    modes with k_i = 0 are annihilated."""
    if f.shift is not None:
        raise BasisMismatchError("Riesz transform acts on the standard basis")
    pair = f.params.pair(i)
    coeffs = {}
    for k, v in sorted(f.coeffs.items()):
        if k[i - 1] == 0:
            continue
        lam = lambda_mode(f.params, k)
        # k_i > 0 already guarantees a positive eigenvalue; the inverse
        # square root at the zero mode can never be reached.
        assert lam > 0.0
        factor = 0.5 * (k[i - 1] + pair.alpha + pair.beta + 1.0) / math.sqrt(lam)
        coeffs[_sub(k, i)] = v * factor
    return Expansion(params=f.params, N=f.N, coeffs=coeffs, shift=i)


def riesz_adjoint(i: int, f: Expansion) -> Expansion:
    """Adjoint Riesz transform: shifted-i mode m maps to standard mode
    m + e_i with factor 2 (m_i + 1) / sqrt(lam_{m+e_i})."""
    if f.shift != i:
        raise BasisMismatchError(
            f"adjoint Riesz transform {i} needs a shifted-{i} expansion"
        )
    coeffs = {}
    for m, v in sorted(f.coeffs.items()):
        k = _add(m, i)
        lam = lambda_mode(f.params, k)
        assert lam > 0.0
        factor = 2.0 * (m[i - 1] + 1) / math.sqrt(lam)
        coeffs[k] = v * factor
    return Expansion(params=f.params, N=f.N + 1, coeffs=coeffs, shift=None)


def conjugate_poisson(i: int, t: float, f: Expansion) -> Expansion:
    """Conjugate Poisson integral: the modified Poisson semigroup applied
    to the Riesz transform.  At t = 0 this is the Riesz transform itself."""
    out = riesz(i, f)
    if t == 0:
        return out
    return apply_modified(i, "poisson", t, out)


def conjugate_poisson_adjoint(i: int, t: float, f: Expansion) -> Expansion:
    """Supplementary conjugate Poisson integral: the Poisson semigroup
    applied to the adjoint Riesz transform."""
    out = riesz_adjoint(i, f)
    if t == 0:
        return out
    return apply_poisson(t, out)


@dataclass(frozen=True)
class ConjugateField:
    """The conjugate tuple at time t: scalar part -P_t of the mean-free
    component, plus one shifted-basis component per coordinate."""

    t: float
    scalar_part: Expansion
    components: tuple[Expansion, ...]


def conjugate_field(f: Expansion, t: float) -> ConjugateField:
    if f.shift is not None:
        raise BasisMismatchError("conjugate field needs a standard expansion")
    scalar = apply_poisson(t, project_pi0(f)).map_coeffs(lambda k, v: -v)
    comps = tuple(conjugate_poisson(i, t, f) for i in range(1, f.d + 1))
    return ConjugateField(t=t, scalar_part=scalar, components=comps)


def delta_apply(j: int, f: Expansion) -> Expansion:
    """Exact spectral derivative action.

    Standard basis: the weighted derivative, landing in the shifted-j
    basis.  Shifted-j basis: the adjoint derivative, landing back in the
    standard basis.  A shifted-i input with i != j has no diagonal spectral
    representation here; use eval_delta for grid values instead."""
    pair = f.params.pair(j)
    if f.shift is None:
        coeffs = {}
        for k, v in sorted(f.coeffs.items()):
            if k[j - 1] == 0:
                continue
            factor = 0.5 * (k[j - 1] + pair.alpha + pair.beta + 1.0)
            coeffs[_sub(k, j)] = v * factor
        return Expansion(params=f.params, N=f.N, coeffs=coeffs, shift=j)
    if f.shift == j:
        coeffs = {}
        for m, v in sorted(f.coeffs.items()):
            coeffs[_add(m, j)] = v * 2.0 * (m[j - 1] + 1)
        return Expansion(params=f.params, N=f.N + 1, coeffs=coeffs, shift=None)
    raise UnsupportedBasisError(
        f"delta_{j} on a shifted-{f.shift} expansion has no spectral path; "
        "use eval_delta for pointwise values"
    )


# -- pointwise derivative evaluation -------------------------------------


def eval_delta(j: int, f: Expansion, points) -> np.ndarray:
    """Values of the weighted derivative delta_j of f at an (M, d) array.

    Works for every basis: each basis function is a product of 1D factors,
    so the derivative relation applies coordinate-wise; a shifted-i input
    with i != j lands in a doubly-shifted product, which only exists here
    as values, never as an Expansion."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != f.d:
        raise ValueError(f"points must have {f.d} coordinates")
    tables: dict = {}

    def table(pair, deg, axis):
        key = (pair.alpha, pair.beta, axis)
        cached = tables.get(key)
        if cached is None or cached.shape[0] < deg + 1:
            tables[key] = polycore.eval_jacobi_table(pair, max(deg, f.N + 1), pts[:, axis])
        return tables[key]

    out = np.zeros(pts.shape[0])
    for k, v in sorted(f.coeffs.items()):
        term = np.full(pts.shape[0], v)
        for axis in range(f.d):
            i = axis + 1
            pair = f.params.pair(i)
            deg = k[axis]
            x = pts[:, axis]
            if i == f.shift:
                shifted = pair.shifted()
                if i == j:
                    # delta of Phi * (raised polynomial):
                    # -x P + (1 - x^2) (d/dx P), derivative relation applied.
                    factor = -x * table(shifted, deg, axis)[deg]
                    if deg >= 1:
                        c = 0.5 * (deg + shifted.alpha + shifted.beta + 1.0)
                        factor = factor + (1.0 - x * x) * c * table(
                            shifted.shifted(), deg - 1, axis
                        )[deg - 1]
                else:
                    factor = np.sqrt(1.0 - x * x) * table(shifted, deg, axis)[deg]
            else:
                if i == j:
                    if deg == 0:
                        factor = np.zeros_like(x)
                    else:
                        c = 0.5 * (deg + pair.alpha + pair.beta + 1.0)
                        factor = (
                            np.sqrt(1.0 - x * x)
                            * c
                            * table(pair.shifted(), deg - 1, axis)[deg - 1]
                        )
                else:
                    factor = table(pair, deg, axis)[deg]
            term = term * factor
        out += term
    return out


def eval_delta_fd(j: int, f: Expansion, points, step: float = 1e-5) -> np.ndarray:
    """Finite-difference cross-check of eval_delta (never the primary path)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    up = pts.copy()
    dn = pts.copy()
    up[:, j - 1] += step
    dn[:, j - 1] -= step
    phi_j = np.sqrt(1.0 - pts[:, j - 1] ** 2)
    return phi_j * (synthesize(f, up) - synthesize(f, dn)) / (2.0 * step)


# -- potential function ---------------------------------------------------


def potential_coefficients(f: Expansion, t: float) -> Expansion:
    """Coefficients of the potential whose joint gradient is the conjugate
    field: a_k lam_k^{-1/2} exp(-t sqrt(lam_k)) on mean-free modes."""
    if f.shift is not None:
        raise BasisMismatchError("potential needs a standard expansion")
    zero = (0,) * f.d

    def fn(k, v):
        if k == zero:
            return 0.0
        lam = lambda_mode(f.params, k)
        return v / math.sqrt(lam) * math.exp(-t * math.sqrt(lam))

    return f.map_coeffs(fn)


def potential_function(f: Expansion, t: float, x) -> float | np.ndarray:
    return synthesize(potential_coefficients(f, t), x)


# -- Cauchy-Riemann scheme verification -----------------------------------


@dataclass
class EquationResidual:
    equation: str
    t: float
    max_residual: float
    path: str  # spectral | grid | coefficient


@dataclass
class CRReport:
    t: float
    params: ParamVector
    grid_points: int
    residuals: list[EquationResidual] = field(default_factory=list)

    def worst(self) -> float:
        return max((r.max_residual for r in self.residuals), default=0.0)

    def to_records(self) -> list[dict]:
        return [
            {
                "equation": r.equation,
                "t": r.t,
                "params": {"alpha": list(self.params.alpha), "beta": list(self.params.beta)},
                "max_residual": r.max_residual,
                "grid_spec": {"points": self.grid_points},
                "path": r.path,
            }
            for r in self.residuals
        ]


def _dt_poisson(f: Expansion) -> Expansion:
    return f.map_coeffs(lambda k, v: -v * math.sqrt(lambda_mode(f.params, k)))


def _dt_modified(i: int, f: Expansion) -> Expansion:
    return f.map_coeffs(lambda k, v: -v * math.sqrt(modified_lambda(f.params, i, k)))


def verify_cauchy_riemann(f: Expansion, t: float, points) -> CRReport:
    """Evaluate both sides of the conjugacy equations on a point set.

    Spectral paths wherever the operators are basis-diagonal, coordinate-wise
    analytic evaluation for the mixed derivatives, and coefficient-level
    comparison for the composition identity of the supplementary integrals."""
    if f.shift is not None:
        raise BasisMismatchError("verification needs a standard expansion")
    if t <= 0:
        raise ValueError("time must be positive")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = f.d
    report = CRReport(t=t, params=f.params, grid_points=pts.shape[0])

    pois = apply_poisson(t, f)
    conj = [conjugate_poisson(i, t, f) for i in range(1, d + 1)]
    rieszed = [riesz(i, f) for i in range(1, d + 1)]

    def record(name, values, path):
        report.residuals.append(
            EquationResidual(
                equation=name,
                t=t,
                max_residual=float(np.max(np.abs(values))) if np.size(values) else 0.0,
                path=path,
            )
        )

    # cr1: mixed weighted derivatives of the conjugate components agree.
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            lhs = eval_delta(j, conj[i - 1], pts)
            rhs = eval_delta(i, conj[j - 1], pts)
            record(f"cr1[{i},{j}]", lhs - rhs, "grid")

    # cr2: delta_j of the Poisson integral equals minus the t-derivative of
    # the j-th conjugate component.
    for j in range(1, d + 1):
        lhs = eval_delta(j, pois, pts)
        rhs = synthesize(_dt_modified(j, conj[j - 1]), pts)
        record(f"cr2[{j}]", lhs + rhs, "spectral")

    # cr3: the adjoint divergence of the conjugate components equals minus
    # the t-derivative of the Poisson integral.
    div = np.zeros(pts.shape[0])
    for j in range(1, d + 1):
        div = div + synthesize(delta_apply(j, conj[j - 1]), pts)
    record("cr3", div + synthesize(_dt_poisson(pois), pts), "spectral")

    # cr5: each conjugate component is harmonic for its modified operator.
    for j in range(1, d + 1):
        second = _dt_modified(j, _dt_modified(j, conj[j - 1]))
        mod = conj[j - 1].map_coeffs(
            lambda k, v, jj=j: v * modified_lambda(f.params, jj, k)
        )
        diff = second.map_coeffs(lambda k, v: v - mod.coeffs[k])
        record(f"cr5[{j}]", synthesize(diff, pts), "spectral")

    # hh1: adjoint derivative of the modified Poisson integral equals minus
    # the t-derivative of the supplementary conjugate integral.
    for j in range(1, d + 1):
        g = rieszed[j - 1]
        lhs = synthesize(delta_apply(j, apply_modified(j, "poisson", t, g)), pts)
        ubar = apply_poisson(t, riesz_adjoint(j, g))
        record(f"hh1[{j}]", lhs + synthesize(_dt_poisson(ubar), pts), "spectral")

    # hh2 (one dimension only).
    if d == 1:
        g = rieszed[0]
        ubar = apply_poisson(t, riesz_adjoint(1, g))
        lhs = synthesize(delta_apply(1, ubar), pts)
        rhs = synthesize(_dt_modified(1, apply_modified(1, "poisson", t, g)), pts)
        record("hh2", lhs + rhs, "spectral")

    # hh3: the supplementary integrals are harmonic for the base operator.
    for j in range(1, d + 1):
        ubar = apply_poisson(t, riesz_adjoint(j, rieszed[j - 1]))
        second = _dt_poisson(_dt_poisson(ubar))
        jop = ubar.map_coeffs(lambda k, v: v * lambda_mode(f.params, k))
        diff = second.map_coeffs(lambda k, v: v - jop.coeffs[k])
        record(f"hh3[{j}]", synthesize(diff, pts), "spectral")

    # hh4: summed two-sided conjugation reproduces the doubled-time Poisson
    # integral of the mean-free part; coefficient-level comparison.
    total: dict = {}
    for j in range(1, d + 1):
        back = conjugate_poisson_adjoint(j, t, conj[j - 1])
        for k, v in back.coeffs.items():
            total[k] = total.get(k, 0.0) + v
    target = apply_poisson(2.0 * t, project_pi0(f))
    worst = 0.0
    for k in set(total) | set(target.coeffs):
        worst = max(worst, abs(total.get(k, 0.0) - target.coeffs.get(k, 0.0)))
    report.residuals.append(
        EquationResidual(equation="hh4", t=t, max_residual=worst, path="coefficient")
    )
    return report


# -- diagnostics ----------------------------------------------------------


def naive_adjoint_blowup_diagnostic(node_counts=(8, 16, 32, 64, 128)) -> list[float]:
    """L2 norms of the naive adjoint-based transform of the degree-one mode
    at parameters (0, 0), under increasingly fine quadrature.

    Replacing the weighted derivative by its adjoint inside the Riesz
    definition produces (2x^2 - 1)/(sqrt(2) Phi), whose squared norm
    diverges logarithmically; the returned sequence grows without bound.
    Diagnostic only -- not part of the operator surface."""
    from .quadrature import gauss_jacobi
    from .params import ParamPair

    norms = []
    for n in node_counts:
        rule = gauss_jacobi(ParamPair(0.0, 0.0), n)
        x = rule.nodes
        vals = (2.0 * x * x - 1.0) / (math.sqrt(2.0) * np.sqrt(1.0 - x * x))
        norms.append(float(np.sqrt(np.sum(rule.weights * vals * vals))))
    return norms
