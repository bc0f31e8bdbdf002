"""Conjugacy scheme for multi-dimensional Jacobi expansions.

Semigroups, Riesz transforms, conjugate Poisson integrals and
Littlewood-Paley square functions as exact spectral maps on truncated
expansions, verified against an exact-rational symbolic oracle and
Gauss-rule quadrature."""

from .params import ParamPair, ParamVector, ParameterError, uniform_params
from .spectral import (
    BasisMismatchError,
    Expansion,
    KernelTable,
    UnderResolvedError,
    apply_heat,
    apply_modified,
    apply_poisson,
    heat_kernel_table,
    lambda_mode,
    maximal_operator,
    modes_of,
    modified_kernel_table,
    modified_lambda,
    poisson_kernel_table,
    project_pi0,
    subordinated_poisson,
    synthesize,
    synthesize_grid,
)
from .conjugacy import (
    ConjugateField,
    conjugate_field,
    conjugate_poisson,
    conjugate_poisson_adjoint,
    delta_apply,
    eval_delta,
    potential_function,
    riesz,
    riesz_adjoint,
    verify_cauchy_riemann,
)
from .quadrature import (
    QuadRule1D,
    QuadratureError,
    TensorGrid,
    fourier_coefficients,
    fourier_coefficients_shifted,
    gauss_jacobi,
    lp_norm,
    make_grid,
    total_mass,
)
from .squarefn import (
    GFunctionResult,
    NormProbeReport,
    g_function,
    g_tilde,
    probe_operator_norm,
    verify_domination,
    verify_energy_identity,
)

__version__ = "0.1.0"

__all__ = [
    "ParamPair",
    "ParamVector",
    "ParameterError",
    "uniform_params",
    "BasisMismatchError",
    "Expansion",
    "KernelTable",
    "UnderResolvedError",
    "apply_heat",
    "apply_modified",
    "apply_poisson",
    "heat_kernel_table",
    "lambda_mode",
    "maximal_operator",
    "modes_of",
    "modified_kernel_table",
    "modified_lambda",
    "poisson_kernel_table",
    "project_pi0",
    "subordinated_poisson",
    "synthesize",
    "synthesize_grid",
    "ConjugateField",
    "conjugate_field",
    "conjugate_poisson",
    "conjugate_poisson_adjoint",
    "delta_apply",
    "eval_delta",
    "potential_function",
    "riesz",
    "riesz_adjoint",
    "verify_cauchy_riemann",
    "QuadRule1D",
    "QuadratureError",
    "TensorGrid",
    "fourier_coefficients",
    "fourier_coefficients_shifted",
    "gauss_jacobi",
    "lp_norm",
    "make_grid",
    "total_mass",
    "GFunctionResult",
    "NormProbeReport",
    "g_function",
    "g_tilde",
    "probe_operator_norm",
    "verify_domination",
    "verify_energy_identity",
    "__version__",
]
