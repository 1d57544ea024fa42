"""Finite-precision p-adic computation with a two-parameter deformation.

Exact modular arithmetic in Q_p with precision tracking, the deformed Haar
distribution on Z_p balls, Volkenborn-type integration as approximant
sequences, Mahler expansion in the Gaussian binomial basis, and a
property-audit harness with a CLI front end.
"""

from .padic import (
    DomainError,
    PadicError,
    PadicNumber,
    PrecisionBudget,
    PrecisionError,
    div,
    norm,
    padic_from_fraction,
    padic_from_integer,
    padic_log,
    valuation,
    vp,
)
from .calculus import (
    RhoQParams,
    p_power_bracket,
    q_number,
    rhoq_binomial,
    rhoq_factorial,
    rhoq_integer,
    rhoq_number,
    rhoq_power,
    vp_factorial,
)
from .sequences import ApproximantSequence
from .measures import (
    Ball,
    DensityScaled,
    Distribution,
    InvarianceReport,
    LinearCombination,
    RhoQHaar,
    ZeroDistribution,
    check_invariance,
    difference,
    lipschitz_estimate,
    radon_nikodym_derivative,
    rhoq_haar_measure,
)
from .integration import (
    IntegrableFunction,
    IntegralComparison,
    WeightedDistribution,
    bernoulli_comparison_report,
    bracket_power,
    carlitz_bernoulli,
    const,
    coordinate,
    exponential,
    integral_against_weighted,
    linear_combination,
    mahler_function,
    mixed_power,
    pointwise,
    poly_in_bracket,
    poly_in_x,
    product,
    ratio_exponential,
    volkenborn_integral,
    weighted_measure,
    weighted_measure_direct,
    weighted_measure_sequence,
)
from .mahler import (
    MahlerSeries,
    difference_quotient_norm_grid,
    lipschitz_norm_grid,
    mahler_coefficients,
    mahler_evaluate,
    sup_norm_grid,
    truncation_polynomial,
)
from .audit import (
    AuditConfig,
    AuditReport,
    audit_closed_form,
    audit_decomposition,
    audit_lipschitz,
    audit_weighted_measure,
    run_audits,
)

__all__ = [
    "ApproximantSequence",
    "AuditConfig",
    "AuditReport",
    "Ball",
    "DensityScaled",
    "Distribution",
    "DomainError",
    "IntegrableFunction",
    "IntegralComparison",
    "InvarianceReport",
    "LinearCombination",
    "MahlerSeries",
    "PadicError",
    "PadicNumber",
    "PrecisionBudget",
    "PrecisionError",
    "RhoQHaar",
    "RhoQParams",
    "WeightedDistribution",
    "ZeroDistribution",
    "audit_closed_form",
    "audit_decomposition",
    "audit_lipschitz",
    "audit_weighted_measure",
    "bernoulli_comparison_report",
    "bracket_power",
    "carlitz_bernoulli",
    "check_invariance",
    "const",
    "coordinate",
    "difference",
    "difference_quotient_norm_grid",
    "div",
    "exponential",
    "integral_against_weighted",
    "linear_combination",
    "lipschitz_estimate",
    "lipschitz_norm_grid",
    "mahler_coefficients",
    "mahler_evaluate",
    "mahler_function",
    "mixed_power",
    "norm",
    "p_power_bracket",
    "padic_from_fraction",
    "padic_from_integer",
    "padic_log",
    "pointwise",
    "poly_in_bracket",
    "poly_in_x",
    "product",
    "q_number",
    "radon_nikodym_derivative",
    "ratio_exponential",
    "rhoq_binomial",
    "rhoq_factorial",
    "rhoq_haar_measure",
    "rhoq_integer",
    "rhoq_number",
    "rhoq_power",
    "run_audits",
    "sup_norm_grid",
    "truncation_polynomial",
    "valuation",
    "volkenborn_integral",
    "vp",
    "vp_factorial",
    "weighted_measure",
    "weighted_measure_direct",
    "weighted_measure_sequence",
]

__version__ = "0.1.0"
