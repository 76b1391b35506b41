"""Transform-algebra solver for deformed difference equations.

First-order problems Df(t) + c f(pt) = g(t) with g zero or resonant, and
the dilated oscillator D^2 h(t) + w^2 h(p^2 t) = 0: both are solved by
taking the first-kind transform, isolating the image algebraically, and
inverting through the closed-form table. verify_solution substitutes a
candidate back into the equation with exact derivative stencils.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import DEFAULT_TRUNCATION, PQBase, SeriesTruncation
from .calculus import pq_derivative_iterated
from .errors import PQDomainError, UnsupportedProblemError
from .expressions import Const, ExpSmall, FunctionExpr, Sum
from .laplace import (RationalBasic, Quadratic, TransformExprBase, TransformKind,
                      TransformSum, combine_transforms, invert_by_table,
                      transform_table)

_RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class PQCauchyProblem:
    """D^order f(t) + coefficient * f(p^dilation_exponent t) = forcing(t),
    with f(0) = initial_value and, for order 2, (Df)(0) = initial_derivative."""

    order: int
    dilation_exponent: int
    coefficient: float
    forcing: FunctionExpr
    initial_value: float
    initial_derivative: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.order not in (1, 2):
            raise PQDomainError(f"problem order must be 1 or 2, got {self.order}")
        if self.dilation_exponent != self.order:
            raise UnsupportedProblemError(
                f"only the f(p^order t) dilation shape is solvable; order "
                f"{self.order} needs dilation exponent {self.order}, "
                f"got {self.dilation_exponent}")
        if not isinstance(self.forcing, FunctionExpr):
            raise PQDomainError(f"forcing must be an expression, got {self.forcing!r}")
        object.__setattr__(self, "coefficient", float(self.coefficient))
        object.__setattr__(self, "initial_value", float(self.initial_value))
        if self.order == 2 and self.initial_derivative is None:
            raise PQDomainError("a second-order problem needs initial_derivative")
        if self.initial_derivative is not None:
            object.__setattr__(self, "initial_derivative",
                               float(self.initial_derivative))


@dataclass(frozen=True)
class ResidualReport:
    """Result of substituting a candidate back into the equation."""

    max_abs_residual: float
    sample_points: tuple[float, ...]
    per_point: tuple[float, ...]
    initial_value_error: float
    initial_derivative_error: float
    tolerance: float
    passed: bool


def _is_zero_forcing(expr: FunctionExpr) -> bool:
    if isinstance(expr, Const):
        return expr.value == 0.0
    if isinstance(expr, Sum):
        return all(c == 0.0 for c, _ in expr.terms)
    return False


def _substitute_scale(F: TransformExprBase, c: float) -> TransformExprBase:
    """F(c * s) as a closed form; the algebra step that undoes an argument
    dilation picked up by the derivative rule."""
    if isinstance(F, RationalBasic):
        m = len(F.roots)
        return RationalBasic(F.scale / c ** m, tuple(r / c for r in F.roots),
                             s_min=F.s_min / c)
    if isinstance(F, TransformSum):
        return combine_transforms(
            [(coef, _substitute_scale(e, c)) for coef, e in F.terms])
    raise UnsupportedProblemError(
        f"cannot substitute into {type(F).__name__} during solving")


def _append_root(F: TransformExprBase, root: float) -> TransformExprBase:
    """Divide a closed form by (s - root)."""
    if isinstance(F, RationalBasic):
        return RationalBasic(F.scale, F.roots + (root,),
                             s_min=max(F.s_min, root, 0.0))
    if isinstance(F, TransformSum):
        return combine_transforms([(c, _append_root(e, root)) for c, e in F.terms])
    raise UnsupportedProblemError(
        f"cannot divide {type(F).__name__} by a linear factor during solving")


def first_order_transform(problem: PQCauchyProblem, base: PQBase) -> TransformExprBase:
    """Image of the first-order solution before inversion.

    Taking the first-kind transform of Df + c f(pt) = g gives
    F(s/p)(s + c)/p = G(s) + f(0); substituting back to the natural
    argument leaves F(s) = (G(ps) + f(0)) / (s + c/p). Exposed separately
    so the algebraic intermediate can be inspected.
    """
    if problem.order != 1:
        raise UnsupportedProblemError("first_order_transform needs an order-1 problem")
    p, q = base.p, base.q
    c = problem.coefficient
    root = -c / p
    terms: list[tuple[float, TransformExprBase]] = []
    if problem.initial_value != 0.0:
        terms.append((1.0, RationalBasic(problem.initial_value, (root,),
                                         s_min=max(0.0, root))))
    g = problem.forcing
    if not _is_zero_forcing(g):
        lam = -c
        if not (isinstance(g, ExpSmall)
                and math.isclose(g.a, lam * q, rel_tol=_RESONANCE_TOL,
                                 abs_tol=1e-300)):
            raise UnsupportedProblemError(
                "forcing must be zero or the resonant small exponential with "
                f"argument scale {lam * q} (coefficient * -q); got {g.describe()}")
        G = transform_table(g, base, TransformKind.FIRST)
        G_at_ps = _substitute_scale(G, p)
        terms.append((1.0, _append_root(G_at_ps, root)))
    if not terms:
        return RationalBasic(0.0, ())
    return combine_transforms(terms)


def solve_first_order(problem: PQCauchyProblem, base: PQBase) -> FunctionExpr:
    """Closed-form solution of Df + c f(pt) = g, f(0) given.

    Zero forcing yields f(0) times the small exponential of -c t (a
    constant when c = 0); the resonant forcing e((-c) q t) adds the
    t-times-exponential secular term.
    """
    return invert_by_table(first_order_transform(problem, base), base,
                           TransformKind.FIRST)


def oscillator_problem(omega: float, initial_derivative: float,
                       initial_value: float) -> PQCauchyProblem:
    """The dilated oscillator D^2 h(t) + omega^2 h(p^2 t) = 0 as a problem
    record (for verify_solution)."""
    return PQCauchyProblem(order=2, dilation_exponent=2,
                           coefficient=float(omega) ** 2, forcing=Const(0.0),
                           initial_value=initial_value,
                           initial_derivative=initial_derivative)


def oscillator_transform(omega: float, A: float, B: float,
                         base: PQBase) -> TransformExprBase:
    """Image of the oscillator solution, already normalized to the p-symbol
    denominator (p s)^2 + (omega/sqrt(p))^2 * p^2.

    The raw algebra gives (p^4 B s + p^3 A) / ((p^2 s)^2 + p omega^2);
    dividing through by p^2 lands on the table's quadratic shape.
    """
    if omega <= 0:
        raise PQDomainError(f"oscillator frequency must be positive, got {omega}")
    p = base.p
    A = float(A)
    B = float(B)
    if A == 0.0 and B == 0.0:
        return RationalBasic(0.0, ())
    return Quadratic(p * p * B, p * A, p, omega / math.sqrt(p), 1)


def solve_oscillator(omega: float, A: float, B: float, base: PQBase) -> FunctionExpr:
    """Solution of D^2 h(t) + omega^2 h(p^2 t) = 0 with h(0) = B and
    (Dh)(0) = A: the circular pair at the slowed frequency omega/sqrt(p)."""
    return invert_by_table(oscillator_transform(omega, A, B, base), base,
                           TransformKind.FIRST)


def verify_solution(problem: PQCauchyProblem, candidate: FunctionExpr,
                    base: PQBase, points, tol: float = 1e-8,
                    trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> ResidualReport:
    """Substitute candidate into the problem's equation at the given points.

    Derivatives use the exact multiplicative stencil, the dilation term is
    evaluated directly, and the initial data are read off the candidate's
    series head, so every error reported is the candidate's own. Points
    whose stencil leaves a series' radius raise a domain error naming the
    point.
    """
    points = tuple(float(t) for t in points)
    if not points:
        raise PQDomainError("need at least one sample point")
    c = problem.coefficient
    dil = base.p ** problem.dilation_exponent

    def f(t: float) -> float:
        return candidate.evaluate(base, t, trunc)

    per: list[float] = []
    for t in points:
        if t <= 0:
            raise PQDomainError(f"sample points must be positive, got {t}")
        try:
            deriv = pq_derivative_iterated(f, base, problem.order, t)
            residual = deriv + c * f(dil * t) - problem.forcing.evaluate(base, t, trunc)
        except PQDomainError as exc:
            raise PQDomainError(
                f"candidate cannot be evaluated on the stencil of t = {t}: {exc}"
            ) from exc
        per.append(residual)

    f0, df0 = candidate.taylor2(base)
    iv_err = abs(f0 - problem.initial_value)
    if problem.initial_derivative is None:
        id_err = 0.0
    else:
        id_err = abs(df0 - problem.initial_derivative)
    max_abs = max(abs(r) for r in per)
    passed = max_abs <= tol and iv_err <= tol and id_err <= tol
    return ResidualReport(
        max_abs_residual=max_abs,
        sample_points=points,
        per_point=tuple(per),
        initial_value_error=iv_err,
        initial_derivative_error=id_err,
        tolerance=tol,
        passed=passed,
    )


__all__ = [
    "PQCauchyProblem",
    "ResidualReport",
    "first_order_transform",
    "solve_first_order",
    "oscillator_problem",
    "oscillator_transform",
    "solve_oscillator",
    "verify_solution",
]
