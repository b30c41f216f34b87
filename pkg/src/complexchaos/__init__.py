"""Verification-grade calculus for complex Wiener chaos over discretized
control measures: kernel tensor algebra, complex Hermite polynomials, exact
chaos expansions with a Wick-rule oracle, product and covariance identities,
independence criteria, and a seeded Monte Carlo cross-check."""

__version__ = "0.1.0"

from .chaos import (
    ChaosPolynomial,
    CovarianceComparison,
    DiagnosticsRow,
    KernelSequence,
    PairDiagnostics,
    ProductTerm,
    VerificationReport,
    asymptotic_diagnostics,
    covariance_squares,
    expand,
    hypercontractivity_check,
    independence_check,
    integral_conjugate,
    isometry_check,
    moment_factorization_gap,
    product,
    product_check,
    product_conjugated,
    product_conjugated_check,
)
from .hermite import HermitePolynomial, build, evaluate, hermite_product, resolve_rho
from .kernels import (
    MAX_CELLS,
    MAX_TOTAL_ORDER,
    ContractionSpec,
    DiscreteMeasure,
    Kernel,
    contract,
    indicator_to_orthonormal,
    inner,
    ito_symmetrize,
    norm,
    ordinary_symmetrize,
    random_kernel,
    reversed_conjugate,
)
from .montecarlo import Estimate, SamplePlan, estimate, sample_coordinates
from .oracle import MomentQuery, expectation, monomial_expectation, pair_expectation

__all__ = [
    "ChaosPolynomial",
    "ContractionSpec",
    "CovarianceComparison",
    "DiagnosticsRow",
    "DiscreteMeasure",
    "Estimate",
    "HermitePolynomial",
    "Kernel",
    "KernelSequence",
    "MAX_CELLS",
    "MAX_TOTAL_ORDER",
    "MomentQuery",
    "PairDiagnostics",
    "ProductTerm",
    "SamplePlan",
    "VerificationReport",
    "asymptotic_diagnostics",
    "build",
    "contract",
    "covariance_squares",
    "estimate",
    "evaluate",
    "expand",
    "expectation",
    "hermite_product",
    "hypercontractivity_check",
    "independence_check",
    "indicator_to_orthonormal",
    "inner",
    "integral_conjugate",
    "isometry_check",
    "ito_symmetrize",
    "moment_factorization_gap",
    "monomial_expectation",
    "norm",
    "ordinary_symmetrize",
    "pair_expectation",
    "product",
    "product_check",
    "product_conjugated",
    "product_conjugated_check",
    "random_kernel",
    "resolve_rho",
    "reversed_conjugate",
    "sample_coordinates",
]
