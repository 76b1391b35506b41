"""Two-parameter deformed calculus: derivatives and integrals on the
geometric grid, deformed special functions, the two associated Laplace
transforms, and a transform-algebra solver for deformed difference
equations."""

from .arith import (DEFAULT_TRUNCATION, PQBase, Regime, SeriesTruncation,
                    Sign, binom2, pochhammer_inf, pq_binomial, pq_factorial,
                    pq_number, pq_number_real, pq_power_finite,
                    pq_power_infinite_partial)
from .calculus import (DEFAULT_GRID, GridConfig, GridSumInfo,
                       deriv_reciprocal_closed, improper_info, pq_derivative,
                       pq_derivative_iterated, pq_integral_finite,
                       pq_integral_finite_info, pq_integral_improper,
                       pq_integral_interval)
from .errors import (DivergenceError, InversionError, PQConvergenceError,
                     PQDomainError, PQError, PQRangeError, PoleError,
                     SingularityError, TruncationError,
                     UnsupportedProblemError, UnsupportedTransformError)
from .expressions import (BigCos, BigCosh, BigSin, BigSinh, Const, Cos, Cosh,
                          ExpBig, ExpSmall, FunctionExpr, Monomial,
                          MonomialTimesExpBig, MonomialTimesExpSmall, Power,
                          Sin, Sinh, Sum, combine, expr_close, expr_from_dict)
from .functions import (EvalInfo, HypergeomSpec, TrigKind, exp_big,
                        exp_big_info, exp_big_zeros_start, exp_radius,
                        exp_small, exp_small_info, first_kernel_integral,
                        gamma_first, gamma_first_integral, gamma_second,
                        hypergeom_phi, hypergeom_phi_info, trig_eval,
                        trig_eval_info)
from .laplace import (PowerLaw, Quadratic, RationalBasic, SeriesRule,
                      TransformExpr, TransformKind, TransformSum,
                      combine_transforms, derivative_of_transform,
                      eval_transform_expr, invert_by_table, numeric_s_min,
                      scaling_apply, table_rows, transform_expr_close,
                      transform_expr_from_dict, transform_numeric,
                      transform_numeric_expr, transform_numeric_info,
                      transform_of_derivative, transform_table)
from .parsing import parse_expr
from .solver import (PQCauchyProblem, ResidualReport, first_order_transform,
                     oscillator_problem, oscillator_transform,
                     solve_first_order, solve_oscillator, verify_solution)
from .suites import CheckResult, run_suite, suite_names

__version__ = "1.0.0"

__all__ = [
    "__version__",
    # arithmetic
    "PQBase", "Regime", "SeriesTruncation", "DEFAULT_TRUNCATION", "Sign",
    "binom2", "pq_number", "pq_number_real", "pq_factorial", "pq_binomial",
    "pq_power_finite", "pochhammer_inf", "pq_power_infinite_partial",
    # calculus
    "GridConfig", "DEFAULT_GRID", "GridSumInfo", "pq_derivative",
    "pq_derivative_iterated", "deriv_reciprocal_closed", "pq_integral_finite",
    "pq_integral_finite_info", "pq_integral_interval", "pq_integral_improper",
    "improper_info",
    # special functions
    "EvalInfo", "exp_radius", "exp_small", "exp_small_info", "exp_big",
    "exp_big_info", "exp_big_zeros_start", "TrigKind", "trig_eval",
    "trig_eval_info", "HypergeomSpec", "hypergeom_phi", "hypergeom_phi_info",
    "gamma_first", "gamma_first_integral", "gamma_second",
    "first_kernel_integral",
    # expressions
    "FunctionExpr", "Const", "Monomial", "Power", "ExpSmall", "ExpBig",
    "Cos", "Sin", "BigCos", "BigSin", "Cosh", "Sinh", "BigCosh", "BigSinh",
    "MonomialTimesExpSmall", "MonomialTimesExpBig", "Sum", "combine",
    "expr_close", "expr_from_dict", "parse_expr",
    # transforms
    "TransformKind", "TransformExpr", "RationalBasic", "PowerLaw",
    "Quadratic", "SeriesRule", "TransformSum", "combine_transforms",
    "eval_transform_expr", "transform_table", "transform_numeric",
    "transform_numeric_info", "transform_numeric_expr", "numeric_s_min",
    "scaling_apply", "derivative_of_transform", "transform_of_derivative",
    "invert_by_table", "transform_expr_close", "transform_expr_from_dict",
    "table_rows",
    # solver
    "PQCauchyProblem", "ResidualReport", "first_order_transform",
    "solve_first_order", "oscillator_problem", "oscillator_transform",
    "solve_oscillator", "verify_solution",
    # suites
    "CheckResult", "run_suite", "suite_names",
    # errors
    "PQError", "PQDomainError", "PQRangeError", "SingularityError",
    "PoleError", "UnsupportedTransformError", "InversionError",
    "UnsupportedProblemError", "PQConvergenceError", "TruncationError",
    "DivergenceError",
]
