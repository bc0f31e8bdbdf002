"""Gauss rules for the beta-type measure, tensor grids, analysis, and norms.

Rules come from the symmetric-tridiagonal eigenproblem of the monic
recurrence coefficients.  The shifted analysis folds one factor Phi_i^2
into the weight analytically, so coefficient computation stays exact for
band-limited inputs in both bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import polycore
from .params import ParamPair, ParamVector
from .spectral import Expansion, modes_of


class QuadratureError(RuntimeError):
    """Rule construction failed or produced an invalid rule."""


class InsufficientGridError(ValueError):
    """Grid resolution too low for the requested degree."""


def total_mass(p: ParamPair) -> float:
    """Integral of the weight over (-1, 1): 2^(a+b+1) B(a+1, b+1)."""
    return math.exp(
        (p.alpha + p.beta + 1.0) * math.log(2.0)
        + math.lgamma(p.alpha + 1.0)
        + math.lgamma(p.beta + 1.0)
        - math.lgamma(p.alpha + p.beta + 2.0)
    )


@dataclass(frozen=True)
class QuadRule1D:
    params: ParamPair
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.nodes)


def gauss_jacobi(p: ParamPair, n: int) -> QuadRule1D:
    """n-point Gauss rule for the beta-type weight of parameters p."""
    if n < 1:
        raise ValueError("node count must be positive")
    a, b = p.alpha, p.beta
    ab = a + b
    mass = total_mass(p)

    diag = np.empty(n)
    diag[0] = (b - a) / (ab + 2.0)
    for i in range(1, n):
        diag[i] = (b * b - a * a) / ((2.0 * i + ab) * (2.0 * i + ab + 2.0))
    off_sq = np.empty(max(n - 1, 0))
    if n > 1:
        off_sq[0] = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) ** 2 * (ab + 3.0))
    for i in range(2, n):
        s = 2.0 * i + ab
        off_sq[i - 1] = (
            4.0 * i * (i + a) * (i + b) * (i + ab) / (s * s * (s * s - 1.0))
        )

    try:
        nodes, vectors = eigh_tridiagonal(diag, np.sqrt(off_sq))
    except Exception as exc:  # scipy raises LinAlgError on non-convergence
        raise QuadratureError(f"tridiagonal eigensolver failed: {exc}") from exc
    weights = mass * vectors[0, :] ** 2

    if np.any(np.abs(nodes) >= 1.0) or np.any(np.diff(nodes) <= 0.0):
        raise QuadratureError("nodes must be strictly increasing inside (-1, 1)")
    if abs(float(np.sum(weights)) - mass) > 1e-12 * mass:
        raise QuadratureError("weights fail the total-mass check")
    return QuadRule1D(params=p, nodes=nodes, weights=weights)


@dataclass(frozen=True)
class TensorGrid:
    """Per-coordinate rules; iteration is row-major over coordinate indices."""

    rules: tuple[QuadRule1D, ...]

    @property
    def d(self) -> int:
        return len(self.rules)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(r.n for r in self.rules)

    def axes(self) -> list[np.ndarray]:
        return [r.nodes for r in self.rules]

    def nodes(self) -> np.ndarray:
        """All tensor nodes as an (M, d) array, row-major."""
        grids = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=-1)

    def weight_array(self) -> np.ndarray:
        cached = getattr(self, "_weight_cache", None)
        if cached is None:
            cached = self.rules[0].weights
            for r in self.rules[1:]:
                cached = np.multiply.outer(cached, r.weights)
            object.__setattr__(self, "_weight_cache", cached)
        return cached

    def weights(self) -> np.ndarray:
        return self.weight_array().reshape(-1)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(self.weight_array() * values.reshape(self.shape)))


def default_node_count(N: int) -> int:
    """Covers products of two degree-N polynomials with margin."""
    return max(2 * N + 8, 32)


def make_grid(params: ParamVector, n: int | tuple[int, ...]) -> TensorGrid:
    counts = (n,) * params.d if isinstance(n, int) else tuple(n)
    if len(counts) != params.d:
        raise ValueError("need one node count per coordinate")
    return TensorGrid(
        tuple(gauss_jacobi(params.pair(i + 1), counts[i]) for i in range(params.d))
    )


def grid_for_expansion(params: ParamVector, N: int) -> TensorGrid:
    return make_grid(params, default_node_count(N))


def _values_on(f, grid: TensorGrid) -> np.ndarray:
    if callable(f):
        vals = np.asarray(f(grid.nodes()), dtype=float)
    else:
        vals = np.asarray(f, dtype=float)
    if vals.size != int(np.prod(grid.shape)):
        raise ValueError("value array does not match the grid")
    return vals.reshape(grid.shape)


def _abs_power(vals: np.ndarray, p: float) -> np.ndarray:
    # Multiplication beats np.power by an order of magnitude on the large
    # grids the norm probes sweep.
    if p == 1.0:
        return vals
    if p == 2.0:
        return vals * vals
    if p == 1.5:
        return vals * np.sqrt(vals)
    if p == 3.0:
        return vals * vals * vals
    if p == 4.0:
        sq = vals * vals
        return sq * sq
    return vals**p


def lp_norm(values, p: float, grid: TensorGrid) -> float:
    """The L^p norm of grid values against the tensor measure.

    p = inf returns the grid maximum, a lower bound of the true sup norm
    (endpoint suprema are never sampled)."""
    vals = np.abs(_values_on(values, grid))
    if math.isinf(p):
        return float(np.max(vals))
    if p < 1:
        raise ValueError("p must be at least 1")
    return float(np.sum(grid.weight_array() * _abs_power(vals, p)) ** (1.0 / p))


def _analysis(vals: np.ndarray, grid: TensorGrid, pairs, N: int) -> np.ndarray:
    coeff = vals
    for i, rule in enumerate(grid.rules):
        table = polycore.eval_jacobi_table(pairs[i], N, rule.nodes)  # (N+1, n)
        weighted = table * rule.weights  # rows scaled by quadrature weights
        # Contract the current leading node axis against nodes.
        coeff = np.tensordot(coeff, weighted, axes=([0], [1]))
    norms = np.ones(())
    for i, pair in enumerate(pairs):
        h = np.array([polycore.squared_norm(pair, k) for k in range(N + 1)])
        norms = np.multiply.outer(norms, h)
    return coeff / norms


def fourier_coefficients(f, params: ParamVector, N: int, grid: TensorGrid) -> Expansion:
    """Expansion coefficients of f against the standard basis.

    f is a callable on an (M, d) node array or a value array on the grid."""
    for i, rule in enumerate(grid.rules):
        if rule.n < N + 1:
            raise InsufficientGridError(
                f"axis {i + 1} has {rule.n} nodes; need at least {N + 1}"
            )
        pair = params.pair(i + 1)
        if (rule.params.alpha, rule.params.beta) != (pair.alpha, pair.beta):
            raise ValueError("grid parameters do not match the expansion")
    vals = _values_on(f, grid)
    pairs = [params.pair(i + 1) for i in range(params.d)]
    coeff = _analysis(vals, grid, pairs, N)
    return Expansion(
        params=params,
        N=N,
        coeffs={k: float(coeff[k]) for k in modes_of(params.d, N)},
    )


def shifted_grid(grid: TensorGrid, i: int) -> TensorGrid:
    """Same node counts, with coordinate i rebuilt at raised parameters."""
    rules = list(grid.rules)
    old = rules[i - 1]
    rules[i - 1] = gauss_jacobi(old.params.shifted(), old.n)
    return TensorGrid(tuple(rules))


def fourier_coefficients_shifted(
    i: int, f, params: ParamVector, N: int, grid: TensorGrid
) -> Expansion:
    """Coefficients against the shifted-i basis Phi_i * (raised parameters).

    One factor Phi_i^2 folds into the weight: the inner products run over
    the raised measure in coordinate i with the integrand divided by Phi_i,
    which keeps band-limited inputs exactly integrable."""
    for j, rule in enumerate(grid.rules):
        pair = params.pair(j + 1)
        if (rule.params.alpha, rule.params.beta) != (pair.alpha, pair.beta):
            raise ValueError("grid parameters do not match the expansion")
    sgrid = shifted_grid(grid, i)
    for rule in sgrid.rules:
        if rule.n < N + 1:
            raise InsufficientGridError(f"need at least {N + 1} nodes per axis")
    nodes = sgrid.nodes()
    if callable(f):
        raw = np.asarray(f(nodes), dtype=float)
    else:
        raise ValueError("shifted analysis requires a callable input")
    vals = (raw / polycore.phi(nodes[:, i - 1])).reshape(sgrid.shape)
    shifted_params = params.shifted(i)
    pairs = [shifted_params.pair(j + 1) for j in range(params.d)]
    coeff = _analysis(vals, sgrid, pairs, N)
    return Expansion(
        params=params,
        N=N,
        coeffs={k: float(coeff[k]) for k in modes_of(params.d, N)},
        shift=i,
    )
