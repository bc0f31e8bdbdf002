"""Exact-rational oracle for the Phi-weighted polynomial algebra."""

from .identities import (
    IDENTITY_IDS,
    IdentityReport,
    ModeResult,
    UnknownIdentityError,
    modes_up_to,
    verify_all,
    verify_identity,
)
from .operators import (
    DegreeCapError,
    apply_delta,
    apply_delta_star,
    apply_jacobi_operator,
    apply_modified_operator,
    apply_modified_operator_commutator,
    jacobi_exact,
    jacobi_mode,
    jacobi_recurrence,
    shifted_basis_function,
)
from .phipoly import (
    NotRepresentableError,
    PhiPoly,
    RationalParamVector,
    WeightedQuotient,
    divide_by_weight,
    uniform_rational_params,
)
from .scalars import MixedRootError, QuadExtScalar

__all__ = [
    "IDENTITY_IDS",
    "IdentityReport",
    "ModeResult",
    "UnknownIdentityError",
    "modes_up_to",
    "verify_all",
    "verify_identity",
    "DegreeCapError",
    "apply_delta",
    "apply_delta_star",
    "apply_jacobi_operator",
    "apply_modified_operator",
    "apply_modified_operator_commutator",
    "jacobi_exact",
    "jacobi_mode",
    "jacobi_recurrence",
    "shifted_basis_function",
    "NotRepresentableError",
    "PhiPoly",
    "RationalParamVector",
    "WeightedQuotient",
    "divide_by_weight",
    "uniform_rational_params",
    "MixedRootError",
    "QuadExtScalar",
]
