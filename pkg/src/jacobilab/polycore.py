"""One-dimensional Jacobi polynomial kernels.

Evaluation by the classical three-term recurrence, spectral eigenvalues,
squared norms against the beta-type weight, and the derivative relation
that shifts both type parameters up by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ParamPair


class DomainError(ValueError):
    """Raised when an evaluation point is outside the admissible range."""


@dataclass(frozen=True)
class SpectralMode1D:
    """Degree k together with its eigenvalue k(k + alpha + beta + 1)."""

    k: int
    lam: float
    sqrt_lam: float


def eigenvalue(p: ParamPair, k: int) -> SpectralMode1D:
    """Spectral data of degree k for parameters p."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    lam = k * (k + p.alpha + p.beta + 1.0)
    return SpectralMode1D(k=k, lam=lam, sqrt_lam=math.sqrt(lam))


def phi(x):
    """The weight factor sqrt(1 - x^2); accepts scalars or arrays, |x| <= 1."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError("phi requires |x| <= 1")
    out = np.sqrt(1.0 - arr * arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def _check_interior(x: np.ndarray):
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("evaluation point must lie strictly inside (-1, 1)")


def _p2_closed_form(a: float, b: float, x: np.ndarray) -> np.ndarray:
    # Degree-2 closed form; avoids the (a+b+2) recurrence denominators,
    # which degrade as a+b approaches -2.
    return (
        (1 + b) * (2 + b) * (x - 1.0) ** 2
        + 2 * (2 + a) * (2 + b) * (x * x - 1.0)
        + (1 + a) * (2 + a) * (x + 1.0) ** 2
    ) / 8.0


def eval_jacobi(p: ParamPair, k: int, x):
    """Evaluate the degree-k Jacobi polynomial of type p at x in (-1, 1).

    Degrees 0..2 use closed forms; higher degrees use the three-term
    recurrence, whose denominators stay bounded away from zero for k >= 3
    whenever alpha, beta > -1.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    scalar = np.isscalar(x) or np.asarray(x).ndim == 0
    arr = np.asarray(x, dtype=float)
    _check_interior(arr)
    a, b = p.alpha, p.beta

    if k == 0:
        out = np.ones_like(arr)
    elif k == 1:
        out = 0.5 * ((a + b + 2.0) * arr + (a - b))
    else:
        pm2 = 0.5 * ((a + b + 2.0) * arr + (a - b))
        pm1 = _p2_closed_form(a, b, arr)
        if k == 2:
            out = pm1
        else:
            for n in range(3, k + 1):
                c = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
                an = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
                bn = (2.0 * n + a + b - 1.0) * (a * a - b * b)
                cn = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
                pm2, pm1 = pm1, ((an * arr + bn) * pm1 - cn * pm2) / c
            out = pm1
    return float(out) if scalar else out


def eval_jacobi_table(p: ParamPair, kmax: int, x) -> np.ndarray:
    """All degrees 0..kmax at once; returns shape (kmax + 1,) + x.shape."""
    if kmax < 0:
        raise ValueError("degree must be nonnegative")
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    _check_interior(arr)
    a, b = p.alpha, p.beta
    table = np.empty((kmax + 1,) + arr.shape)
    table[0] = 1.0
    if kmax >= 1:
        table[1] = 0.5 * ((a + b + 2.0) * arr + (a - b))
    if kmax >= 2:
        table[2] = _p2_closed_form(a, b, arr)
    for n in range(3, kmax + 1):
        c = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        an = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
        bn = (2.0 * n + a + b - 1.0) * (a * a - b * b)
        cn = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        table[n] = ((an * arr + bn) * table[n - 1] - cn * table[n - 2]) / c
    return table


def eval_jacobi_derivative(p: ParamPair, k: int, x):
    """d/dx of the degree-k Jacobi polynomial.

    Equals (k + alpha + beta + 1)/2 times the degree-(k-1) polynomial with
    both parameters raised by one; zero for k = 0.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k == 0:
        scalar = np.isscalar(x) or np.asarray(x).ndim == 0
        arr = np.asarray(x, dtype=float)
        _check_interior(arr)
        return 0.0 if scalar else np.zeros_like(arr)
    factor = 0.5 * (k + p.alpha + p.beta + 1.0)
    return factor * eval_jacobi(p.shifted(), k - 1, x)


def squared_norm(p: ParamPair, k: int) -> float:
    """Squared L2 norm of the degree-k polynomial against the weight.

    Computed in log-gamma form so large degrees do not overflow.  For k = 0
    the factor (2k + alpha + beta + 1) Gamma(k + alpha + beta + 1) is
    replaced by Gamma(alpha + beta + 2).
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    a, b = p.alpha, p.beta
    log_val = (
        (a + b + 1.0) * math.log(2.0)
        + math.lgamma(k + a + 1.0)
        + math.lgamma(k + b + 1.0)
        - math.lgamma(k + 1.0)
    )
    if k == 0:
        log_val -= math.lgamma(a + b + 2.0)
    else:
        log_val -= math.log(2.0 * k + a + b + 1.0) + math.lgamma(k + a + b + 1.0)
    return math.exp(log_val)
