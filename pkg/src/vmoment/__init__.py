"""Lattice-point and divisor error terms, square-root relation series,
and power-moment checks."""

from .constants import constants, euler_gamma, pi_machin, zeta
from .coefficients import (ALTERNATING, CUSP12, DIVISOR, TWO_SQUARES,
                           CoefficientKind, ErrorTermKind, coefficient_kind,
                           error_term_kind)
from .errors import GuardError, RangeError, ResourceError, VmomentError
from .error_terms import (delta_star_identity_check, error_term,
                          error_term_values, truncation_remainder,
                          voronoi_truncated, voronoi_truncated_values)
from .moments import (MomentReport, QuadratureSpec, adaptive_quadrature,
                      cos_sqrt_bound, cos_sqrt_integral, integrate_moment,
                      integrate_truncated_moment, mean_square_remainder,
                      remainder_envelope)
from .relations import (Relation, SqrtInteger, brute_force_enumerate,
                        count_bound_value, count_inequality_solutions,
                        enumerate_relations, min_gap, parity_check,
                        sqrt_decompose)
from .series import (BkValue, ExponentBook, MainTermCoefficient,
                     SeriesEstimate, bk, class_sum, exponent_book,
                     explicit_divisor_coefficient, main_term_coefficient,
                     series_skl, series_value, tail_fit,
                     zeta_mean_square_constant)
from .tables import ArithTable, build_tables, load_cache, save_cache, tau

__version__ = "0.1.0"

__all__ = [
    "ALTERNATING", "ArithTable", "BkValue", "CUSP12", "CoefficientKind",
    "DIVISOR", "ErrorTermKind", "ExponentBook", "GuardError",
    "MainTermCoefficient", "MomentReport", "QuadratureSpec", "RangeError",
    "Relation", "ResourceError", "SeriesEstimate", "SqrtInteger",
    "TWO_SQUARES", "VmomentError", "adaptive_quadrature", "bk",
    "brute_force_enumerate", "class_sum", "coefficient_kind", "constants",
    "cos_sqrt_bound", "cos_sqrt_integral", "count_bound_value",
    "count_inequality_solutions", "delta_star_identity_check",
    "enumerate_relations", "error_term", "error_term_kind",
    "error_term_values", "euler_gamma", "exponent_book",
    "explicit_divisor_coefficient", "integrate_moment",
    "integrate_truncated_moment", "load_cache", "main_term_coefficient",
    "mean_square_remainder", "min_gap", "parity_check", "pi_machin",
    "remainder_envelope", "save_cache", "series_skl", "series_value",
    "sqrt_decompose", "tables", "tail_fit", "tau", "truncation_remainder",
    "voronoi_truncated", "voronoi_truncated_values", "zeta",
    "zeta_mean_square_constant", "build_tables",
]
