"""Differential and spectral operators on the exact Phi-weighted algebra.

delta_i is the weighted derivative Phi_i d/dx_i; delta_star_i its formal
adjoint against the beta-type measure.  The second-order diffusion operator
factors as the sum of delta_star_i delta_i, and its modified companions
arise either from that factorization with one pair swapped, or from adding
the commutator [delta_i, delta_star_i] -- both paths are implemented so
they can be checked against each other.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .phipoly import (
    NotRepresentableError,
    PhiPoly,
    RationalParamVector,
    WeightedQuotient,
)


class DegreeCapError(ValueError):
    """Raised when a symbolic construction exceeds its configured cap."""


def partial(i: int, f: PhiPoly) -> WeightedQuotient:
    """d/dx_i of f; the result may carry one power of (1 - x_i^2) below."""
    d = f.d
    plain: dict = {}
    singular: dict = {}
    for (e, s), c in f.terms.items():
        if e[i - 1]:
            e_down = list(e)
            e_down[i - 1] -= 1
            key = (tuple(e_down), s)
            val = e[i - 1] * c
            plain[key] = plain.get(key, 0) + val
        if s[i - 1]:
            # d/dx Phi = -x Phi / (1 - x^2)
            e_up = list(e)
            e_up[i - 1] += 1
            key = (tuple(e_up), s)
            singular[key] = singular.get(key, 0) - c
    num = PhiPoly(d, plain) * PhiPoly.weight(d, i) + PhiPoly(d, singular)
    den = [0] * d
    den[i - 1] = 1
    return WeightedQuotient(num, tuple(den))


def partial_wq(i: int, wq: WeightedQuotient) -> WeightedQuotient:
    """d/dx_i of a weighted quotient (quotient rule against the weights)."""
    inner = partial(i, wq.num)
    den = tuple(a + b for a, b in zip(inner.den, wq.den))
    result = WeightedQuotient(inner.num, den)
    j = wq.den[i - 1]
    if j:
        # d/dx (1-x^2)^{-j} = 2 j x (1-x^2)^{-j-1}
        bump = wq.num * PhiPoly.coordinate(wq.num.d, i).scale(Fraction(2 * j))
        den_up = list(wq.den)
        den_up[i - 1] += 1
        result = result + WeightedQuotient(bump, tuple(den_up))
    return result


def apply_delta(i: int, f: PhiPoly) -> PhiPoly:
    """Phi_i d/dx_i f, canonicalized."""
    return partial(i, f).times_poly(PhiPoly.phi_factor(f.d, i)).to_phipoly()


def _adjoint_multiplier(i: int, params: RationalParamVector, d: int) -> PhiPoly:
    # (alpha + 1/2) sqrt((1+x)/(1-x)) - (beta + 1/2) sqrt((1-x)/(1+x))
    # equals [(alpha - beta) + (alpha + beta + 1) x] / Phi.
    a, b = params.pair(i)
    return PhiPoly.constant(d, a - b) + PhiPoly.coordinate(d, i).scale(a + b + 1)


def apply_delta_star(i: int, params: RationalParamVector, f: PhiPoly) -> PhiPoly:
    """The formal adjoint of delta_i applied to f.

    Representable only when the singular multiplier cancels; in practice f
    must carry the factor Phi_i (enforced by the exact division).
    """
    d = f.d
    grad_part = -partial(i, f).times_poly(PhiPoly.phi_factor(d, i))
    mult_num = _adjoint_multiplier(i, params, d) * PhiPoly.phi_factor(d, i) * f
    den = [0] * d
    den[i - 1] = 1
    mult_part = WeightedQuotient(mult_num, tuple(den))
    try:
        return (grad_part + mult_part).to_phipoly()
    except NotRepresentableError as exc:
        raise NotRepresentableError(
            f"delta_star_{i}: input lacks the Phi_{i} factor needed for "
            f"cancellation ({exc})"
        ) from exc


def _jacobi_wq(params: RationalParamVector, f: PhiPoly) -> WeightedQuotient:
    d = f.d
    total = WeightedQuotient(PhiPoly.zero(d))
    for i in range(1, d + 1):
        a, b = params.pair(i)
        first = partial(i, f)
        second = partial_wq(i, first).times_poly(PhiPoly.weight(d, i))
        drift_poly = PhiPoly.constant(d, b - a) - PhiPoly.coordinate(d, i).scale(a + b + 2)
        total = total - (second + first.times_poly(drift_poly))
    return total


def apply_jacobi_operator(params: RationalParamVector, f: PhiPoly) -> PhiPoly:
    """The second-order diffusion operator, from its defining expression."""
    return _jacobi_wq(params, f).to_phipoly()


def apply_modified_operator(i: int, params: RationalParamVector, f: PhiPoly) -> PhiPoly:
    """Modified operator for coordinate i, by the swapped factorization
    delta_i delta_star_i + sum_{j != i} delta_star_j delta_j."""
    acc = apply_delta(i, apply_delta_star(i, params, f))
    for j in range(1, f.d + 1):
        if j != i:
            acc = acc + apply_delta_star(j, params, apply_delta(j, f))
    return acc


def apply_modified_operator_commutator(
    i: int, params: RationalParamVector, f: PhiPoly
) -> PhiPoly:
    """Same operator via J f + [(a+1/2)/(1-x_i) + (b+1/2)/(1+x_i)] f.

    The two summands individually leave the algebra; only their sum divides
    out.  Used to cross-check apply_modified_operator.
    """
    a, b = params.pair(i)
    d = f.d
    # (a+1/2)(1+x) + (b+1/2)(1-x) = (a+b+1) + (a-b) x, all over (1-x^2)
    comm_num = (
        PhiPoly.constant(d, a + b + 1) + PhiPoly.coordinate(d, i).scale(a - b)
    ) * f
    den = [0] * d
    den[i - 1] = 1
    total = _jacobi_wq(params, f) + WeightedQuotient(comm_num, tuple(den))
    try:
        return total.to_phipoly()
    except NotRepresentableError as exc:
        raise NotRepresentableError(
            f"modified operator (commutator path) not representable: {exc}"
        ) from exc


# -- exact Jacobi polynomials ------------------------------------------


def _rodrigues_1d(alpha: Fraction, beta: Fraction, k: int, d: int, coord: int) -> PhiPoly:
    """Degree-k polynomial at the given coordinate by symbolic
    differentiation of the Rodrigues product."""
    derivs = {(k, k): Fraction(1)}
    for _ in range(k):
        nxt: dict = {}
        for (i, j), c in derivs.items():
            if i > 0:
                key = (i - 1, j)
                nxt[key] = nxt.get(key, Fraction(0)) - c * (alpha + i)
            if j > 0:
                key = (i, j - 1)
                nxt[key] = nxt.get(key, Fraction(0)) + c * (beta + j)
        derivs = nxt
    x = PhiPoly.coordinate(d, coord)
    one_minus = PhiPoly.one(d) - x
    one_plus = PhiPoly.one(d) + x
    poly = PhiPoly.zero(d)
    for (i, j), c in derivs.items():
        piece = PhiPoly.constant(d, c)
        for _ in range(i):
            piece = piece * one_minus
        for _ in range(j):
            piece = piece * one_plus
        poly = poly + piece
    scale = Fraction((-1) ** k, 2**k * math.factorial(k))
    return poly.scale(scale)


def jacobi_exact(params: RationalParamVector, k: int, cap: int = 8) -> PhiPoly:
    """One-dimensional exact Jacobi polynomial of degree k (params.d == 1)."""
    if params.d != 1:
        raise ValueError("jacobi_exact takes one-dimensional parameters")
    if k > cap:
        raise DegreeCapError(f"degree {k} exceeds cap {cap}")
    return _rodrigues_1d(params.alpha[0], params.beta[0], k, 1, 1)


def jacobi_recurrence(params: RationalParamVector, k: int) -> PhiPoly:
    """Same polynomial by the exact three-term recurrence; cross-check path."""
    if params.d != 1:
        raise ValueError("jacobi_recurrence takes one-dimensional parameters")
    a, b = params.pair(1)
    x = PhiPoly.coordinate(1, 1)
    pm2 = PhiPoly.one(1)
    if k == 0:
        return pm2
    pm1 = x.scale(Fraction(a + b + 2, 2)) + PhiPoly.constant(1, Fraction(a - b, 2))
    for n in range(2, k + 1):
        c = 2 * n * (n + a + b) * (2 * n + a + b - 2)
        an = (2 * n + a + b - 1) * (2 * n + a + b) * (2 * n + a + b - 2)
        bn = (2 * n + a + b - 1) * (a * a - b * b)
        cn = 2 * (n + a - 1) * (n + b - 1) * (2 * n + a + b)
        new = (x.scale(an) + PhiPoly.constant(1, bn)) * pm1 - pm2.scale(cn)
        pm2, pm1 = pm1, new.scale(Fraction(1, 1) / c)
    return pm1


def jacobi_mode(params: RationalParamVector, k: tuple[int, ...], cap: int = 8) -> PhiPoly:
    """Tensor-product exact Jacobi polynomial for a multi-index k."""
    if len(k) != params.d:
        raise ValueError("mode length must match dimension")
    if any(ki > cap for ki in k):
        raise DegreeCapError(f"mode {k} exceeds per-coordinate cap {cap}")
    poly = PhiPoly.one(params.d)
    for i, ki in enumerate(k, start=1):
        a, b = params.pair(i)
        poly = poly * _rodrigues_1d(a, b, ki, params.d, i)
    return poly


def shifted_basis_function(
    params: RationalParamVector, i: int, k: tuple[int, ...], cap: int = 8
) -> PhiPoly:
    """Phi_i times the mode-k polynomial with coordinate i's parameters
    raised by one: the eigenbasis of the i-th modified operator."""
    return PhiPoly.phi_factor(params.d, i) * jacobi_mode(params.shifted(i), k, cap)
