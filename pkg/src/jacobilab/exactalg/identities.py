"""Zero-tolerance verification of the differential and spectral identities.

Each identity is checked mode by mode: both sides are expanded on a basis
mode k, with time-dependent factors exp(-c t sqrt(lam)) tracked
structurally by the squared rate c^2 lam and the scalar factors
lam^(1/2 or -1/2) kept formal.  A side is a map {squared rate: algebra
element}; two sides agree iff the maps agree exactly.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .operators import (
    apply_delta,
    apply_delta_star,
    apply_jacobi_operator,
    apply_modified_operator,
    apply_modified_operator_commutator,
    jacobi_mode,
    shifted_basis_function,
)
from .phipoly import PhiPoly, RationalParamVector
from .scalars import QuadExtScalar

IDENTITY_IDS = (
    "derivative",
    "adjoint",
    "factorization",
    "commutator",
    "eigen_J",
    "eigen_M",
    "riesz_pol",
    "cr1",
    "cr2",
    "cr3",
    "cr5",
    "hh1",
    "hh2",
    "hh3",
    "sum_RbarR",
    "hh4",
    "spf2",
)


class UnknownIdentityError(ValueError):
    pass


@dataclass
class ModeResult:
    mode: tuple[int, ...]
    status: str  # PASS | FAIL
    residual_terms: list[str] = field(default_factory=list)


@dataclass
class IdentityReport:
    identity: str
    alpha: tuple
    beta: tuple
    cap: int
    results: list[ModeResult]
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(r.status == "PASS" for r in self.results)

    def to_records(self) -> list[dict]:
        params = {
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
        }
        return [
            {
                "identity": self.identity,
                "params": params,
                "mode": list(r.mode),
                "status": r.status,
                "residual_terms": r.residual_terms,
            }
            for r in self.results
        ]


def worker_count() -> int:
    """Worker cap for mode-parallel verification; JACOBI_THREADS bounds it."""
    env = os.environ.get("JACOBI_THREADS")
    if not env:
        return 1
    try:
        return max(1, min(int(env), os.cpu_count() or 1))
    except ValueError:
        return 1


def modes_up_to(d: int, cap: int):
    """All multi-indices with total degree at most cap, lexicographic."""
    for k in itertools.product(range(cap + 1), repeat=d):
        if sum(k) <= cap:
            yield k


# -- per-identity checkers ----------------------------------------------
#
# Each checker returns a list of (label, lhs, rhs) where the sides are
# either PhiPoly values or {squared_rate: PhiPoly} maps.


def _sides(label, lhs, rhs):
    if isinstance(lhs, PhiPoly):
        lhs = {Fraction(0): lhs}
    if isinstance(rhs, PhiPoly):
        rhs = {Fraction(0): rhs}
    return label, lhs, rhs


def _sub(k: tuple[int, ...], i: int) -> tuple[int, ...]:
    out = list(k)
    out[i - 1] -= 1
    return tuple(out)


def _add(k: tuple[int, ...], i: int) -> tuple[int, ...]:
    out = list(k)
    out[i - 1] += 1
    return tuple(out)


class _ModeContext:
    """Shared exact data for one parameter vector and one mode."""

    def __init__(self, params: RationalParamVector, k: tuple[int, ...], cap: int):
        self.params = params
        self.k = k
        self.d = params.d
        self.cap = cap + 1  # room for one index shift
        self.lam = params.eigenvalue(k)
        self.s = QuadExtScalar.sqrt(self.lam)
        self.P = jacobi_mode(params, k, self.cap)

    def shifted_down(self, i: int) -> PhiPoly:
        """Phi_i times the parameter-shifted polynomial at mode k - e_i."""
        if self.k[i - 1] == 0:
            return PhiPoly.zero(self.d)
        return shifted_basis_function(self.params, i, _sub(self.k, i), self.cap)

    def riesz_scalar(self, i: int) -> QuadExtScalar:
        """(1/2) lam^{-1/2} (k_i + alpha_i + beta_i + 1); zero when k_i = 0."""
        if self.k[i - 1] == 0 or self.lam == 0:
            return QuadExtScalar.of(0)
        a, b = self.params.pair(i)
        return self.s.inverse() * (Fraction(self.k[i - 1] + a + b + 1) / 2)

    def conjugate(self, i: int) -> PhiPoly:
        """The i-th conjugate Poisson image of mode k, time factor dropped."""
        return self.shifted_down(i).scale(self.riesz_scalar(i))


def _check_derivative(ctx: _ModeContext):
    from .operators import partial

    out = []
    for i in range(1, ctx.d + 1):
        lhs = partial(i, ctx.P).to_phipoly()
        if ctx.k[i - 1] == 0:
            rhs = PhiPoly.zero(ctx.d)
        else:
            a, b = ctx.params.pair(i)
            factor = Fraction(ctx.k[i - 1] + a + b + 1, 2)
            rhs = jacobi_mode(
                ctx.params.shifted(i), _sub(ctx.k, i), ctx.cap
            ).scale(factor)
        out.append(_sides(f"i={i}", lhs, rhs))
    return out


def _check_adjoint(ctx: _ModeContext):
    out = []
    for i in range(1, ctx.d + 1):
        if ctx.k[i - 1] == 0:
            continue
        lhs = apply_delta_star(i, ctx.params, ctx.shifted_down(i))
        rhs = ctx.P.scale(Fraction(2 * ctx.k[i - 1]))
        out.append(_sides(f"i={i}", lhs, rhs))
    return out


def _check_factorization(ctx: _ModeContext):
    lhs = PhiPoly.zero(ctx.d)
    for i in range(1, ctx.d + 1):
        lhs = lhs + apply_delta_star(i, ctx.params, apply_delta(i, ctx.P))
    rhs = apply_jacobi_operator(ctx.params, ctx.P)
    return [_sides("sum", lhs, rhs)]


def _check_commutator(ctx: _ModeContext):
    out = []
    for i in range(1, ctx.d + 1):
        f = shifted_basis_function(ctx.params, i, ctx.k, ctx.cap)
        lhs = apply_modified_operator(i, ctx.params, f)
        rhs = apply_modified_operator_commutator(i, ctx.params, f)
        out.append(_sides(f"i={i}", lhs, rhs))
    return out


def _check_eigen_J(ctx: _ModeContext):
    lhs = apply_jacobi_operator(ctx.params, ctx.P)
    return [_sides("eigen", lhs, ctx.P.scale(ctx.lam))]


def _check_eigen_M(ctx: _ModeContext):
    out = []
    for i in range(1, ctx.d + 1):
        f = shifted_basis_function(ctx.params, i, ctx.k, ctx.cap)
        lhs = apply_modified_operator(i, ctx.params, f)
        rhs = f.scale(ctx.params.eigenvalue(_add(ctx.k, i)))
        out.append(_sides(f"i={i}", lhs, rhs))
    return out


def _check_riesz_pol(ctx: _ModeContext):
    if ctx.lam == 0:
        return [_sides("trivial", PhiPoly.zero(ctx.d), PhiPoly.zero(ctx.d))]
    out = []
    inv_s = ctx.s.inverse()
    for i in range(1, ctx.d + 1):
        lhs = apply_delta(i, ctx.P).scale(inv_s)
        rhs = ctx.conjugate(i)
        out.append(_sides(f"i={i}", lhs, rhs))
    return out


def _check_cr1(ctx: _ModeContext):
    out = []
    for i in range(1, ctx.d + 1):
        for j in range(i + 1, ctx.d + 1):
            lhs = {ctx.lam: apply_delta(j, ctx.conjugate(i))}
            rhs = {ctx.lam: apply_delta(i, ctx.conjugate(j))}
            out.append(_sides(f"i={i},j={j}", lhs, rhs))
    return out


def _check_cr2(ctx: _ModeContext):
    out = []
    for j in range(1, ctx.d + 1):
        lhs = {ctx.lam: apply_delta(j, ctx.P)}
        rhs = {ctx.lam: ctx.conjugate(j).scale(ctx.s)}
        out.append(_sides(f"j={j}", lhs, rhs))
    return out


def _check_cr3(ctx: _ModeContext):
    lhs_poly = PhiPoly.zero(ctx.d)
    for j in range(1, ctx.d + 1):
        uj = ctx.conjugate(j)
        if not uj.is_zero():
            lhs_poly = lhs_poly + apply_delta_star(j, ctx.params, uj)
    rhs_poly = ctx.P.scale(ctx.s)
    return [_sides("sum", {ctx.lam: lhs_poly}, {ctx.lam: rhs_poly})]


def _check_cr5(ctx: _ModeContext):
    out = []
    for j in range(1, ctx.d + 1):
        uj = ctx.conjugate(j)
        if uj.is_zero():
            continue
        lhs = {ctx.lam: uj.scale(ctx.lam)}
        rhs = {ctx.lam: apply_modified_operator(j, ctx.params, uj)}
        out.append(_sides(f"j={j}", lhs, rhs))
    return out


def _check_hh1(ctx: _ModeContext):
    # Mode k plays the role of the shifted-basis index m.
    out = []
    for j in range(1, ctx.d + 1):
        g = shifted_basis_function(ctx.params, j, ctx.k, ctx.cap)
        nu = ctx.params.eigenvalue(_add(ctx.k, j))
        sp = QuadExtScalar.sqrt(nu)
        lhs = {nu: apply_delta_star(j, ctx.params, g)}
        coeff = sp * (sp.inverse() * Fraction(2 * (ctx.k[j - 1] + 1)))
        rhs_poly = jacobi_mode(ctx.params, _add(ctx.k, j), ctx.cap).scale(coeff)
        rhs = {nu: rhs_poly}
        out.append(_sides(f"j={j}", lhs, rhs))
    return out


def _check_hh2(ctx: _ModeContext):
    if ctx.d != 1:
        return []
    m = ctx.k
    g = shifted_basis_function(ctx.params, 1, m, ctx.cap)
    nu = ctx.params.eigenvalue(_add(m, 1))
    sp = QuadExtScalar.sqrt(nu)
    ubar = jacobi_mode(ctx.params, _add(m, 1), ctx.cap).scale(
        sp.inverse() * Fraction(2 * (m[0] + 1))
    )
    lhs = {nu: apply_delta(1, ubar)}
    rhs = {nu: g.scale(sp)}
    return [_sides("j=1", lhs, rhs)]


def _check_hh3(ctx: _ModeContext):
    out = []
    for j in range(1, ctx.d + 1):
        nu = ctx.params.eigenvalue(_add(ctx.k, j))
        sp = QuadExtScalar.sqrt(nu)
        ubar = jacobi_mode(ctx.params, _add(ctx.k, j), ctx.cap).scale(
            sp.inverse() * Fraction(2 * (ctx.k[j - 1] + 1))
        )
        lhs = {nu: ubar.scale(nu)}
        rhs = {nu: apply_jacobi_operator(ctx.params, ubar)}
        out.append(_sides(f"j={j}", lhs, rhs))
    return out


def _check_sum_RbarR(ctx: _ModeContext):
    lhs = PhiPoly.zero(ctx.d)
    for j in range(1, ctx.d + 1):
        rj = ctx.conjugate(j)
        if rj.is_zero():
            continue
        # Adjoint transform: the j-th modified operator's eigenvalue at the
        # shifted index (k - e_j), then the adjoint derivative.
        nu = ctx.params.eigenvalue(_add(_sub(ctx.k, j), j))
        lhs = lhs + apply_delta_star(
            j, ctx.params, rj.scale(QuadExtScalar.sqrt(nu).inverse())
        )
    rhs = PhiPoly.zero(ctx.d) if ctx.lam == 0 else ctx.P
    return [_sides("sum", lhs, rhs)]


def _check_hh4(ctx: _ModeContext):
    lhs_poly = PhiPoly.zero(ctx.d)
    for j in range(1, ctx.d + 1):
        uj = ctx.conjugate(j)
        if uj.is_zero():
            continue
        nu = ctx.params.eigenvalue(_add(_sub(ctx.k, j), j))
        rbar = apply_delta_star(
            j, ctx.params, uj.scale(QuadExtScalar.sqrt(nu).inverse())
        )
        lhs_poly = lhs_poly + rbar
    key = 4 * ctx.lam
    rhs_poly = PhiPoly.zero(ctx.d) if ctx.lam == 0 else ctx.P
    return [_sides("sum", {key: lhs_poly}, {key: rhs_poly})]


def _check_spf2(ctx: _ModeContext):
    out = []
    for j in range(1, ctx.d + 1):
        uj = ctx.conjugate(j)
        if uj.is_zero():
            continue
        # Left: Riesz then the modified Poisson semigroup; the rate comes
        # from the modified eigenvalue at index (k - e_j) + e_j.
        nu = ctx.params.eigenvalue(_add(_sub(ctx.k, j), j))
        lhs = {nu: uj}
        # Right: Poisson semigroup then Riesz; the rate is the plain
        # eigenvalue at k.
        rhs = {ctx.lam: uj}
        out.append(_sides(f"j={j}", lhs, rhs))
    return out


_CHECKERS = {
    "derivative": _check_derivative,
    "adjoint": _check_adjoint,
    "factorization": _check_factorization,
    "commutator": _check_commutator,
    "eigen_J": _check_eigen_J,
    "eigen_M": _check_eigen_M,
    "riesz_pol": _check_riesz_pol,
    "cr1": _check_cr1,
    "cr2": _check_cr2,
    "cr3": _check_cr3,
    "cr5": _check_cr5,
    "hh1": _check_hh1,
    "hh2": _check_hh2,
    "hh3": _check_hh3,
    "sum_RbarR": _check_sum_RbarR,
    "hh4": _check_hh4,
    "spf2": _check_spf2,
}

assert tuple(_CHECKERS) == IDENTITY_IDS


def _residuals(cases) -> list[str]:
    bad = []
    for label, lhs, rhs in cases:
        keys = set(lhs) | set(rhs)
        for key in keys:
            diff = lhs.get(key, None)
            other = rhs.get(key, None)
            if diff is None:
                diff = -other
            elif other is not None:
                diff = diff - other
            if not diff.is_zero():
                bad.append(f"{label} rate^2={key}: {diff!r}")
    return bad


def _check_mode(name: str, params: RationalParamVector, k, cap: int) -> ModeResult:
    ctx = _ModeContext(params, k, cap)
    cases = _CHECKERS[name](ctx)
    bad = _residuals(cases)
    return ModeResult(mode=k, status="FAIL" if bad else "PASS", residual_terms=bad)


def verify_identity(
    name: str, params: RationalParamVector, cap: int = 4
) -> IdentityReport:
    """Verify one identity on every mode with total degree at most cap.

    Exact arithmetic throughout; a mode fails only if the two sides differ
    as algebra elements.
    """
    if name not in _CHECKERS:
        raise UnknownIdentityError(
            f"unknown identity {name!r}; expected one of {', '.join(IDENTITY_IDS)}"
        )
    note = ""
    if name == "hh2" and params.d != 1:
        return IdentityReport(
            identity=name,
            alpha=params.alpha,
            beta=params.beta,
            cap=cap,
            results=[],
            note="one-dimensional identity; skipped for d > 1",
        )
    modes = list(modes_up_to(params.d, cap))
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda k: _check_mode(name, params, k, cap), modes)
            )
    else:
        results = [_check_mode(name, params, k, cap) for k in modes]
    return IdentityReport(
        identity=name,
        alpha=params.alpha,
        beta=params.beta,
        cap=cap,
        results=results,
        note=note,
    )


def verify_all(params: RationalParamVector, cap: int = 4) -> list[IdentityReport]:
    return [verify_identity(name, params, cap) for name in IDENTITY_IDS]
