"""Zeros of period polynomials of level-one cusp forms.

Hecke eigenforms from the Miller basis, critical L-values, period polynomials,
high-precision zero location, and the explicit sufficient criteria for all
zeros of r_f to lie on the unit circle.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    InsufficientPrecisionError,
    InvalidArgumentError,
    NumericalError,
    PeriodRHError,
    PrecisionEscalationError,
)
from .modforms import (
    CuspForm,
    QSeries,
    delta_series,
    dim_cusp_forms,
    eigenforms,
    eisenstein_series,
    hecke_operator_matrix,
    linear_combination,
    miller_basis,
)
from .lfunctions import CriticalLValues, combine, completed_lvalues, verify_functional_equation
from .periodpoly import (
    PeriodPolynomial,
    ZetaPolynomial,
    half_polynomial_q,
    modified_polynomial_p,
    period_polynomial_r,
    reconstruct_p_from_q,
    rv_transform,
    self_reciprocity_residual,
    zeta_checks,
)
from .zeros import ZeroReport, find_roots, h_disk_criterion, truncated_exp, unimodularity_report
from .criteria import (
    CriterionReport,
    ScanResult,
    UBoundReport,
    constellation_k0,
    criterion_constants,
    main_criterion,
    positive_combination_check,
    probability_scan,
    u_bound,
    u_bound_check,
    u_star,
)

__all__ = [
    "__version__",
    "BudgetExceededError",
    "InsufficientPrecisionError",
    "InvalidArgumentError",
    "NumericalError",
    "PeriodRHError",
    "PrecisionEscalationError",
    "CuspForm",
    "QSeries",
    "delta_series",
    "dim_cusp_forms",
    "eigenforms",
    "eisenstein_series",
    "hecke_operator_matrix",
    "linear_combination",
    "miller_basis",
    "CriticalLValues",
    "combine",
    "completed_lvalues",
    "verify_functional_equation",
    "PeriodPolynomial",
    "ZetaPolynomial",
    "half_polynomial_q",
    "modified_polynomial_p",
    "period_polynomial_r",
    "reconstruct_p_from_q",
    "rv_transform",
    "self_reciprocity_residual",
    "zeta_checks",
    "ZeroReport",
    "find_roots",
    "h_disk_criterion",
    "truncated_exp",
    "unimodularity_report",
    "CriterionReport",
    "ScanResult",
    "UBoundReport",
    "constellation_k0",
    "criterion_constants",
    "main_criterion",
    "positive_combination_check",
    "probability_scan",
    "u_bound",
    "u_bound_check",
    "u_star",
]
