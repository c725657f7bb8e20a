"""Symmetric tensor polynomials orthonormal under a general radial weight.

Builds, evaluates and verifies the order-0..4 tensor polynomial families for
eight built-in weight families (and arbitrary user weights), including the
shifted-argument expansion coefficients and orthonormal multipoles.
"""

from .coefficients import (CoefficientSet, build_coefficients, delta_cap,
                           j_ratio, residual_check)
from .errors import (ConsistencyError, ConvergenceError, DomainError,
                     ExistenceError)
from .expansion import (ChargeDistribution, ExpansionCoefficients,
                        completeness_residual, contract_AP,
                        expansion_coefficients, multipoles, potential_series,
                        reconstruct)
from .moments import (Family, MomentTable, WeightSpec, bose_integral_h,
                      build_moment_table, fermi_integral_g, gamma_fn,
                      graphene_series_i2n, moment_analytic, moment_quadrature,
                      riemann_zeta, sommerfeld_g)
from .polynomials import (PolynomialFamily, as_multivar_poly, eval_component,
                          eval_tensor, make_family, project_1d)
from .tensor_algebra import (MultivarPoly, SymTensor, count_terms,
                             decomposition_counts, delta_full, delta_ortho,
                             integrate_poly, monomial_moment)
from .verification import (GramReport, check_appendix_identities, gram_matrix,
                           inner_product_exact, monte_carlo_inner,
                           verify_printed_weight_coefficients)

__version__ = "0.1.0"

__all__ = [
    "Family", "WeightSpec", "MomentTable", "CoefficientSet",
    "PolynomialFamily", "SymTensor", "MultivarPoly", "GramReport",
    "ExpansionCoefficients", "ChargeDistribution",
    "gamma_fn", "riemann_zeta", "fermi_integral_g", "sommerfeld_g",
    "bose_integral_h", "moment_analytic", "moment_quadrature",
    "build_moment_table", "graphene_series_i2n",
    "delta_full", "delta_ortho", "count_terms", "decomposition_counts",
    "monomial_moment", "integrate_poly",
    "j_ratio", "delta_cap", "build_coefficients", "residual_check",
    "make_family", "eval_component", "eval_tensor", "as_multivar_poly",
    "project_1d",
    "inner_product_exact", "gram_matrix", "check_appendix_identities",
    "monte_carlo_inner", "verify_printed_weight_coefficients",
    "expansion_coefficients", "contract_AP", "reconstruct",
    "completeness_residual", "multipoles", "potential_series",
    "DomainError", "ExistenceError", "ConvergenceError", "ConsistencyError",
]
