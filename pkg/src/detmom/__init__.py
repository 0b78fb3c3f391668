"""Exact moments of determinants of random matrices with i.i.d. entries."""

from .errors import (
    BasisMismatchError,
    BudgetExceededError,
    ConventionMismatchError,
    MissingMomentError,
    OrderCapacityError,
)
from .formulas import (
    MarkClass,
    fourth_moment,
    fourth_moment_egf,
    fourth_moment_zero_mean,
    gaussian_det_moment,
    gaussian_moment_table,
    gaussian_sixth_egf,
    mark_class_egf,
    second_moment,
    second_moment_egf,
    sixth_moment_zero_mean,
    sixth_moment_zero_mean_egf,
)
from .poly import (
    Basis,
    MomentPolynomial,
    MomentSymbol,
    SymbolKind,
    central_mean,
    central_symbol,
    central_to_raw,
    raw_symbol,
    raw_to_central,
)
from .sampling import (
    DistKind,
    DistributionSpec,
    EstimateReport,
    exact_det,
    exact_moments,
    exhaustive_moment,
    mc_estimate,
)
from .series import Convention, TruncatedEGF, constant_series, polynomial_in_t, t_times
from .tables import (
    MarkedRow,
    MarkedTable,
    PermutationTable,
    Reduction,
    TableMode,
    oracle_moment,
    table_count,
)
from .verify import CheckResult, VerificationReport, run_suite

__all__ = [
    "Basis",
    "BasisMismatchError",
    "BudgetExceededError",
    "CheckResult",
    "Convention",
    "ConventionMismatchError",
    "DistKind",
    "DistributionSpec",
    "EstimateReport",
    "MarkClass",
    "MarkedRow",
    "MarkedTable",
    "MissingMomentError",
    "MomentPolynomial",
    "MomentSymbol",
    "OrderCapacityError",
    "PermutationTable",
    "Reduction",
    "SymbolKind",
    "TableMode",
    "TruncatedEGF",
    "VerificationReport",
    "central_mean",
    "central_symbol",
    "central_to_raw",
    "constant_series",
    "exact_det",
    "exact_moments",
    "exhaustive_moment",
    "fourth_moment",
    "fourth_moment_egf",
    "fourth_moment_zero_mean",
    "gaussian_det_moment",
    "gaussian_moment_table",
    "gaussian_sixth_egf",
    "mark_class_egf",
    "mc_estimate",
    "oracle_moment",
    "polynomial_in_t",
    "raw_symbol",
    "raw_to_central",
    "run_suite",
    "second_moment",
    "second_moment_egf",
    "sixth_moment_zero_mean",
    "sixth_moment_zero_mean_egf",
    "t_times",
    "table_count",
]
