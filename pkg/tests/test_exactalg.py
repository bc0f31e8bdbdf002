import random
from fractions import Fraction

import pytest

from jacobilab.exactalg import (
    IDENTITY_IDS,
    NotRepresentableError,
    PhiPoly,
    QuadExtScalar,
    RationalParamVector,
    apply_delta,
    apply_delta_star,
    apply_jacobi_operator,
    apply_modified_operator,
    apply_modified_operator_commutator,
    jacobi_exact,
    jacobi_mode,
    jacobi_recurrence,
    shifted_basis_function,
    uniform_rational_params,
    verify_identity,
)
from jacobilab.exactalg.identities import modes_up_to
from jacobilab.exactalg.operators import DegreeCapError
from jacobilab.exactalg.scalars import MixedRootError

P00 = uniform_rational_params(1, 0, 0)
HALF = Fraction(1, 2)


def random_phipoly(rng, d=2, nterms=4, max_den=16):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randrange(0, 4) for _ in range(d))
        s = tuple(rng.randrange(0, 2) for _ in range(d))
        c = Fraction(rng.randrange(-20, 21), rng.randrange(1, max_den + 1))
        if c:
            terms[(e, s)] = terms.get((e, s), Fraction(0)) + c
    return PhiPoly(d, terms)


def assert_canonical(poly: PhiPoly):
    for (e, s), c in poly.terms.items():
        assert all(v in (0, 1) for v in s)
        assert all(v >= 0 for v in e)
        assert c


# -- scalars ---------------------------------------------------------------


def test_quadext_arithmetic():
    s = QuadExtScalar.sqrt(Fraction(6))
    assert s * s == Fraction(6)
    assert (s + 1) * (s - 1) == Fraction(5)
    assert s * s.inverse() == Fraction(1)
    assert QuadExtScalar.sqrt(Fraction(0)) == Fraction(0)


def test_quadext_mixed_roots_rejected():
    with pytest.raises(MixedRootError):
        QuadExtScalar.sqrt(Fraction(2)) + QuadExtScalar.sqrt(Fraction(3))


# -- algebra ---------------------------------------------------------------


def test_ring_axioms_random():
    rng = random.Random(20240901)
    for _ in range(40):
        a = random_phipoly(rng)
        b = random_phipoly(rng)
        c = random_phipoly(rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        for poly in (a * b, a + b, (a * b) * c):
            assert_canonical(poly)


def test_phi_square_reduces():
    phi = PhiPoly.phi_factor(1, 1)
    assert phi * phi == PhiPoly.weight(1, 1)
    assert_canonical(phi * phi)


def test_zero_coefficients_absent():
    a = PhiPoly.coordinate(1, 1)
    assert (a - a).terms == {}


# -- exact polynomials -----------------------------------------------------


def test_rodrigues_small_cases():
    assert jacobi_exact(P00, 0) == PhiPoly.one(1)
    x = PhiPoly.coordinate(1, 1)
    expected = (x * x).scale(Fraction(3, 2)) - PhiPoly.constant(1, HALF)
    assert jacobi_exact(P00, 2) == expected
    p11 = uniform_rational_params(1, 1, 1)
    assert jacobi_exact(p11, 1) == x.scale(Fraction(2))


def test_rodrigues_matches_recurrence():
    for a, b in ((Fraction(0), Fraction(0)), (-HALF, -HALF), (Fraction(3, 2), HALF)):
        params = RationalParamVector((a,), (b,))
        for k in range(9):
            assert jacobi_exact(params, k) == jacobi_recurrence(params, k)


def test_degree_cap():
    with pytest.raises(DegreeCapError):
        jacobi_exact(P00, 9)
    jacobi_exact(P00, 9, cap=9)


# -- operators -------------------------------------------------------------


def test_delta_examples():
    assert apply_delta(1, PhiPoly.one(1)).is_zero()
    x = PhiPoly.coordinate(1, 1)
    assert apply_delta(1, x) == PhiPoly.phi_factor(1, 1)
    # Weighted derivative lowers the degree and raises the parameters.
    params = uniform_rational_params(1, HALF, Fraction(1))
    k = 3
    lhs = apply_delta(1, jacobi_exact(params, k + 1))
    a, b = params.pair(1)
    rhs = shifted_basis_function(params, 1, (k,)).scale(Fraction(k + a + b + 2) / 2)
    assert lhs == rhs


def test_delta_star_examples():
    phi = PhiPoly.phi_factor(1, 1)
    assert apply_delta_star(1, P00, phi) == PhiPoly.coordinate(1, 1).scale(Fraction(2))
    params = uniform_rational_params(1, HALF, -HALF)
    for k in (1, 2, 4):
        lhs = apply_delta_star(1, params, shifted_basis_function(params, 1, (k - 1,)))
        assert lhs == jacobi_mode(params, (k,)).scale(Fraction(2 * k))
    with pytest.raises(NotRepresentableError):
        apply_delta_star(1, P00, PhiPoly.one(1))


def test_jacobi_operator_examples():
    assert apply_jacobi_operator(P00, PhiPoly.one(1)).is_zero()
    x = PhiPoly.coordinate(1, 1)
    # -(1-x^2)*2 + 2x*2x = 6x^2 - 2.
    assert apply_jacobi_operator(P00, x * x) == (x * x).scale(Fraction(6)) - PhiPoly.constant(1, Fraction(2))
    params2 = RationalParamVector((HALF, Fraction(0)), (Fraction(1), -HALF))
    for k in ((0, 0), (2, 1), (3, 3)):
        poly = jacobi_mode(params2, k)
        lam = params2.eigenvalue(k)
        assert (apply_jacobi_operator(params2, poly) - poly.scale(lam)).is_zero()


def test_factorization():
    params2 = RationalParamVector((HALF, Fraction(1)), (Fraction(0), HALF))
    for k in ((1, 2), (3, 0)):
        poly = jacobi_mode(params2, k)
        total = PhiPoly.zero(2)
        for i in (1, 2):
            total = total + apply_delta_star(i, params2, apply_delta(i, poly))
        assert total == apply_jacobi_operator(params2, poly)


def test_modified_operator_examples():
    # M(Phi * 1) at (0,0) in one dimension equals 2 Phi: the eigenvalue of
    # the index raised by one.
    lhs = apply_modified_operator(1, P00, PhiPoly.phi_factor(1, 1))
    assert lhs == PhiPoly.phi_factor(1, 1).scale(Fraction(2))

    params2 = uniform_rational_params(2, 0, 0)
    basis = shifted_basis_function(params2, 1, (1, 1))
    lam = params2.eigenvalue((2, 1))
    assert apply_modified_operator(1, params2, basis) == basis.scale(lam)
    assert apply_modified_operator_commutator(1, params2, basis) == basis.scale(lam)


def test_modified_operator_requires_phi_factor():
    with pytest.raises(NotRepresentableError):
        apply_modified_operator(1, P00, PhiPoly.coordinate(1, 1))


# -- identity suite --------------------------------------------------------


def test_identity_ids_complete():
    assert len(IDENTITY_IDS) == 17


def test_unknown_identity():
    from jacobilab.exactalg import UnknownIdentityError

    with pytest.raises(UnknownIdentityError):
        verify_identity("nope", P00, 2)


def test_all_identities_pass_small():
    params_list = [
        uniform_rational_params(1, -HALF, -HALF),
        RationalParamVector((HALF, Fraction(1)), (Fraction(0), Fraction(3, 2))),
    ]
    for params in params_list:
        for name in IDENTITY_IDS:
            report = verify_identity(name, params, cap=3)
            assert report.passed, (name, report.results)


def test_identity_zero_mode_trivial():
    for name in IDENTITY_IDS:
        report = verify_identity(name, P00, cap=0)
        assert report.passed


def test_sum_rbar_r_single_mode_by_hand():
    # At k=(1,1), parameters zero: each coordinate contributes
    # k_i (k_i+1) / lam = 2/4, so the composed coefficient is exactly one.
    params = uniform_rational_params(2, 0, 0)
    report = verify_identity("sum_RbarR", params, cap=2)
    assert report.passed
    modes = [r.mode for r in report.results]
    assert (1, 1) in modes


def test_report_serialization():
    report = verify_identity("cr2", P00, cap=2)
    records = report.to_records()
    assert all(
        set(r) == {"identity", "params", "mode", "status", "residual_terms"}
        for r in records
    )
    assert all(r["status"] == "PASS" for r in records)


def test_modes_up_to():
    assert list(modes_up_to(2, 1)) == [(0, 0), (0, 1), (1, 0)]


def test_hh2_skipped_above_one_dimension():
    report = verify_identity("hh2", uniform_rational_params(2, 0, 0), cap=2)
    assert report.passed and report.results == [] and "one-dimensional" in report.note


def test_parallel_verification_matches_sequential(monkeypatch):
    params = RationalParamVector((HALF, Fraction(0)), (Fraction(1), -HALF))
    sequential = verify_identity("cr3", params, cap=3)
    monkeypatch.setenv("JACOBI_THREADS", "4")
    parallel = verify_identity("cr3", params, cap=3)
    assert [r.mode for r in parallel.results] == [r.mode for r in sequential.results]
    assert [r.status for r in parallel.results] == [r.status for r in sequential.results]
    assert parallel.passed
