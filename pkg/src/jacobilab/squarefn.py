"""Littlewood-Paley square functions, their verification, and norm probing.

The time integral of each mode pair has the closed form
integral of t exp(-t(s_k + s_m)) dt = (s_k + s_m)^(-2), so the square
functions reduce to double sums over modes -- no quadrature error on the
primary path.  A log-domain time quadrature survives as the independent
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import polycore
from .params import ParamVector
from .quadrature import TensorGrid, lp_norm
from .spectral import (
    BasisMismatchError,
    Expansion,
    apply_heat,
    apply_modified,
    apply_poisson,
    lambda_mode,
    modes_of,
    modified_lambda,
    synthesize_grid,
)
from .conjugacy import conjugate_poisson, riesz


@dataclass
class GFunctionResult:
    points: np.ndarray
    values: np.ndarray
    method: str  # closed-form | t-quadrature
    cross_residual: float

    @property
    def passed(self) -> bool:
        return self.cross_residual <= 1e-7


@dataclass
class NormProbeReport:
    operator: str
    p: float
    d: int
    N: int
    samples: int
    seed: int
    best_ratio: float
    alpha: tuple[float, ...] = ()
    beta: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "p": self.p,
            "d": self.d,
            "N": self.N,
            "samples": self.samples,
            "seed": self.seed,
            "best_ratio": self.best_ratio,
            "alpha": list(self.alpha),
            "beta": list(self.beta),
        }


def _mode_data(f: Expansion, pts: np.ndarray):
    """Per-mode sqrt-eigenvalues, basis values, and weighted-derivative
    values at the points, for standard-basis f; zero modes dropped."""
    params = f.params
    d = f.d
    modes = [k for k in sorted(f.coeffs) if lambda_mode(params, k) > 0.0]
    coeffs = np.array([f.coeffs[k] for k in modes])
    sq = np.array([math.sqrt(lambda_mode(params, k)) for k in modes])

    tables = {}

    def table(pair, axis):
        key = (pair.alpha, pair.beta, axis)
        if key not in tables:
            tables[key] = polycore.eval_jacobi_table(pair, f.N + 1, pts[:, axis])
        return tables[key]

    npts = pts.shape[0]
    base = np.empty((len(modes), npts))
    deriv = np.empty((d, len(modes), npts))
    for row, k in enumerate(modes):
        prod = np.ones(npts)
        per_axis = []
        for axis in range(d):
            vals = table(params.pair(axis + 1), axis)[k[axis]]
            per_axis.append(vals)
            prod = prod * vals
        base[row] = prod
        for j in range(d):
            pair = params.pair(j + 1)
            if k[j] == 0:
                deriv[j, row] = 0.0
                continue
            c = 0.5 * (k[j] + pair.alpha + pair.beta + 1.0)
            x = pts[:, j]
            dj = c * np.sqrt(1.0 - x * x) * table(pair.shifted(), j)[k[j] - 1]
            others = np.ones(npts)
            for axis in range(d):
                if axis != j:
                    others = others * per_axis[axis]
            deriv[j, row] = dj * others
    return coeffs, sq, base, deriv


def g_function(f: Expansion, x, variant: str = "full") -> np.ndarray:
    """Square function of f at the points x ((M, d) array or length-d point).

    Closed form over mode pairs.  The full variant includes the weighted
    space derivatives; the vertical variant keeps only the time part."""
    if f.shift is not None:
        raise BasisMismatchError("square function acts on the standard basis")
    if variant not in ("full", "vertical"):
        raise ValueError("variant must be 'full' or 'vertical'")
    single = np.asarray(x).ndim == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    coeffs, sq, base, deriv = _mode_data(f, pts)
    if len(coeffs) == 0:
        out = np.zeros(pts.shape[0])
        return float(out[0]) if single else out
    inv_sq = 1.0 / np.add.outer(sq, sq) ** 2
    u0 = (coeffs * sq)[:, None] * base
    gsq = np.einsum("kp,km,mp->p", u0, inv_sq, u0)
    if variant == "full":
        for j in range(f.d):
            uj = coeffs[:, None] * deriv[j]
            gsq = gsq + np.einsum("kp,km,mp->p", uj, inv_sq, uj)
    out = np.sqrt(np.maximum(gsq, 0.0))
    return float(out[0]) if single else out


def _time_rule(n: int = 96, lo: float = 1e-8, hi: float = 80.0):
    # Log-domain Gauss-Legendre; the range is wide enough that the omitted
    # tails sit far below the 1e-7 cross-check budget.
    x, w = np.polynomial.legendre.leggauss(n)
    a, b = math.log(lo), math.log(hi)
    u = 0.5 * (b - a) * x + 0.5 * (b + a)
    t = np.exp(u)
    return t, 0.5 * (b - a) * w * t  # dt = t du


def g_function_quadrature(f: Expansion, x, variant: str = "full", n_t: int = 96) -> np.ndarray:
    """Square function by direct time quadrature; cross-check path."""
    if f.shift is not None:
        raise BasisMismatchError("square function acts on the standard basis")
    single = np.asarray(x).ndim == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    coeffs, sq, base, deriv = _mode_data(f, pts)
    if len(coeffs) == 0:
        out = np.zeros(pts.shape[0])
        return float(out[0]) if single else out
    ts, ws = _time_rule(n_t)
    decay = np.exp(-np.outer(ts, sq))  # (nt, modes)
    gsq = np.zeros(pts.shape[0])
    for ti in range(len(ts)):
        amp = coeffs * decay[ti]
        dt_part = (amp * sq) @ base
        total = dt_part * dt_part
        if variant == "full":
            for j in range(f.d):
                dj = amp @ deriv[j]
                total = total + dj * dj
        gsq += ws[ti] * ts[ti] * total
    out = np.sqrt(np.maximum(gsq, 0.0))
    return float(out[0]) if single else out


def g_function_result(f: Expansion, x, variant: str = "full") -> GFunctionResult:
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    closed = g_function(f, pts, variant)
    quad = g_function_quadrature(f, pts, variant)
    return GFunctionResult(
        points=pts,
        values=closed,
        method="closed-form",
        cross_residual=float(np.max(np.abs(closed - quad))),
    )


def _g_tilde_sq(i: int, f: Expansion, pts: np.ndarray) -> np.ndarray:
    params = f.params
    modes = sorted(f.coeffs)
    coeffs = np.array([f.coeffs[k] for k in modes])
    sq = np.array([math.sqrt(modified_lambda(params, i, k)) for k in modes])
    shifted = params.shifted(i)
    tables = [
        polycore.eval_jacobi_table(shifted.pair(axis + 1), f.N, pts[:, axis])
        for axis in range(f.d)
    ]
    npts = pts.shape[0]
    base = np.empty((len(modes), npts))
    for row, k in enumerate(modes):
        prod = np.ones(npts)
        for axis in range(f.d):
            prod = prod * tables[axis][k[axis]]
        base[row] = prod
    base = base * np.sqrt(1.0 - pts[:, i - 1] ** 2)
    if len(coeffs) == 0:
        return np.zeros(npts)
    inv_sq = 1.0 / np.add.outer(sq, sq) ** 2
    u0 = (coeffs * sq)[:, None] * base
    return np.einsum("kp,km,mp->p", u0, inv_sq, u0)


def g_tilde(i: int, f: Expansion, x) -> np.ndarray:
    """Square function of the i-th modified Poisson semigroup on a
    shifted-i expansion.  Every modified eigenvalue is positive, so no
    mode is excluded -- a nonzero input has nonzero output."""
    if f.shift != i:
        raise BasisMismatchError(f"g-tilde needs a shifted-{i} expansion")
    single = np.asarray(x).ndim == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    out = np.sqrt(np.maximum(_g_tilde_sq(i, f, pts), 0.0))
    return float(out[0]) if single else out


def g_tilde_quadrature(i: int, f: Expansion, x, n_t: int = 96) -> np.ndarray:
    if f.shift != i:
        raise BasisMismatchError(f"g-tilde needs a shifted-{i} expansion")
    single = np.asarray(x).ndim == 1
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    ts, ws = _time_rule(n_t)
    gsq = np.zeros(pts.shape[0])
    from .spectral import synthesize

    for t, w in zip(ts, ws):
        dt = apply_modified(i, "poisson", float(t), f).map_coeffs(
            lambda k, v: -v * math.sqrt(modified_lambda(f.params, i, k))
        )
        vals = synthesize(dt, pts)
        gsq += w * t * vals * vals
    out = np.sqrt(np.maximum(gsq, 0.0))
    return float(out[0]) if single else out


# -- verification reports -------------------------------------------------


@dataclass
class DominationReport:
    points: int
    max_gap: float
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "points": self.points,
            "max_gap": self.max_gap,
            "passed": self.passed,
            "violations": self.violations,
        }


def verify_domination(f: Expansion, points, slack: float = 1e-10) -> DominationReport:
    """Check that each coordinate's modified square function of the Riesz
    transform stays below the full square function, pointwise."""
    if f.shift is not None:
        raise BasisMismatchError("domination check needs a standard expansion")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    g_vals = g_function(f, pts, "full")
    report = DominationReport(points=pts.shape[0], max_gap=-math.inf)
    for i in range(1, f.d + 1):
        gt = g_tilde(i, riesz(i, f), pts)
        gap = gt - g_vals
        report.max_gap = max(report.max_gap, float(np.max(gap)))
        for idx in np.nonzero(gap > slack)[0]:
            report.violations.append(
                {
                    "i": i,
                    "point": [float(c) for c in pts[idx]],
                    "g_tilde": float(gt[idx]),
                    "g": float(g_vals[idx]),
                }
            )
    return report


@dataclass
class EnergyReport:
    lhs: float
    rhs: float

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        if scale == 0.0:
            return 0.0
        return abs(self.lhs - self.rhs) / scale


def verify_energy_identity(f: Expansion, grid: TensorGrid) -> EnergyReport:
    """Energy identity at exponent two: twice the measure integral of the
    squared square function equals the squared norm minus the squared mean
    contribution."""
    if f.shift is not None:
        raise BasisMismatchError("energy identity needs a standard expansion")
    pts = grid.nodes()
    gsq = g_function(f, pts, "full") ** 2
    lhs = 2.0 * float(np.sum(grid.weights() * gsq))
    rhs = 0.0
    zero = (0,) * f.d
    for k, v in f.coeffs.items():
        if k == zero:
            continue
        h = 1.0
        for i, ki in enumerate(k, start=1):
            h *= polycore.squared_norm(f.params.pair(i), ki)
        rhs += v * v * h
    return EnergyReport(lhs=lhs, rhs=rhs)


# -- operator norm probing ------------------------------------------------


def _parse_operator(op: str):
    if op in ("heat", "poisson"):
        return op, None
    if op == "riesz-vec":
        return "riesz-vec", None
    for prefix in ("riesz-", "conjugate-poisson-"):
        if op.startswith(prefix):
            i = int(op[len(prefix):])
            return prefix[:-1], i
    raise ValueError(f"unknown operator id {op!r}")


def _operator_values(op: str, i, t, f: Expansion, axes) -> np.ndarray:
    if op == "heat":
        return synthesize_grid(apply_heat(t, f), axes)
    if op == "poisson":
        return synthesize_grid(apply_poisson(t, f), axes)
    if op == "riesz":
        return synthesize_grid(riesz(i, f), axes)
    if op == "conjugate-poisson":
        return synthesize_grid(conjugate_poisson(i, t, f), axes)
    if op == "riesz-vec":
        total = None
        for j in range(1, f.d + 1):
            vals = synthesize_grid(riesz(j, f), axes)
            total = vals * vals if total is None else total + vals * vals
        return np.sqrt(total)
    raise ValueError(op)


def probe_operator_sweep(
    op: str,
    p_list,
    d_list,
    N: int,
    samples: int,
    seed: int,
    alpha0: float = 0.0,
    beta0: float = 0.0,
    t: float = 1.0,
) -> list[NormProbeReport]:
    """Norm-ratio probes for every (p, d) pair, sharing samples per d.

    The random stream is seeded per dimension and consumed identically no
    matter which exponents are requested, so a row's value never depends on
    the rest of the sweep."""
    from .params import uniform_params
    from .quadrature import grid_for_expansion

    p_list = [float(p) for p in p_list]
    for p in p_list:
        if p < 1 or math.isinf(p):
            raise ValueError("probing requires finite exponents p >= 1")
    kind, i = _parse_operator(op)
    reports = []
    for d in d_list:
        params = uniform_params(d, alpha0, beta0)
        grid = grid_for_expansion(params, N + 1)
        axes = grid.axes()
        rng = np.random.default_rng([seed, d, N])
        mode_list = list(modes_of(d, N))
        best = {p: 0.0 for p in p_list}
        for _ in range(samples):
            draw = rng.standard_normal(len(mode_list))
            f = Expansion(
                params=params,
                N=N,
                coeffs={k: float(v) for k, v in zip(mode_list, draw)},
            )
            fvals = synthesize_grid(f, axes)
            ovals = _operator_values(kind, i, t, f, axes)
            for p in p_list:
                ratio = lp_norm(ovals, p, grid) / lp_norm(fvals, p, grid)
                if ratio > best[p]:
                    best[p] = ratio
        for p in p_list:
            reports.append(
                NormProbeReport(
                    operator=op,
                    p=p,
                    d=d,
                    N=N,
                    samples=samples,
                    seed=seed,
                    best_ratio=best[p],
                    alpha=params.alpha,
                    beta=params.beta,
                )
            )
    return reports


def probe_operator_norm(
    op: str,
    p: float,
    d: int,
    N: int,
    samples: int,
    seed: int,
    params: ParamVector | None = None,
    t: float = 1.0,
) -> NormProbeReport:
    """Largest ratio ||T f||_p / ||f||_p over random truncated expansions.

    Coefficients are standard normal, seeded; the result is a lower bound
    of the operator norm on the truncated class and is deterministic for a
    given seed.  The riesz-vec probe (Euclidean length of the full vector)
    is exploratory."""
    alpha0, beta0 = (0.0, 0.0)
    if params is not None:
        if params.d != d:
            raise ValueError("parameter dimension mismatch")
        alpha0, beta0 = params.alpha[0], params.beta[0]
        if params.alpha != (alpha0,) * d or params.beta != (beta0,) * d:
            raise ValueError("probing uses uniform parameter vectors")
    return probe_operator_sweep(
        op, [p], [d], N, samples, seed, alpha0=alpha0, beta0=beta0, t=t
    )[0]
