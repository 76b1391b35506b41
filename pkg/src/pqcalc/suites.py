"""Named identity suites behind `identity-check`.

Each suite sweeps one family of identities at a fixed tolerance and
reports the worst deviation; they double as the library's cross-checks
between independently implemented routes (series vs product, table vs
quadrature, stencil vs closed form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .arith import (DEFAULT_TRUNCATION, PQBase, SeriesTruncation,
                    pochhammer_inf, pq_number_real)
from .calculus import (DEFAULT_GRID, GridConfig, pq_derivative,
                       pq_integral_finite)
from .errors import PQDomainError
from .expressions import (BigCos, BigCosh, BigSin, BigSinh, Cos, Cosh, ExpBig,
                          ExpSmall, Monomial, MonomialTimesExpSmall, Power,
                          Sin, Sinh)
from .functions import (HypergeomSpec, TrigKind, exp_big, exp_radius,
                        exp_small, gamma_first, gamma_second, hypergeom_phi,
                        trig_eval)
from .laplace import (TransformKind, numeric_s_min, transform_numeric_expr,
                      transform_table)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one identity suite."""

    suite: str
    checks: int
    max_error: float
    tolerance: float
    passed: bool
    worst: str


def _linspace(a: float, b: float, n: int) -> list[float]:
    if n < 2:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def _result(name: str, tol: float,
            errors: list[tuple[float, str]]) -> CheckResult:
    worst_err, worst_desc = max(errors, key=lambda e: e[0])
    return CheckResult(suite=name, checks=len(errors), max_error=worst_err,
                       tolerance=tol, passed=worst_err <= tol, worst=worst_desc)


def _suite_exp_reciprocal(base: PQBase, grid: GridConfig,
                          trunc: SeriesTruncation) -> CheckResult:
    """e(z) E(-z) = 1 on 50 points of [-2, 2]."""
    tol = 1e-10
    errors = []
    for z in _linspace(-2.0, 2.0, 50):
        v = exp_small(base, z, trunc) * exp_big(base, -z, trunc)
        errors.append((abs(v - 1.0), f"z = {z:.6g}"))
    return _result("exp-reciprocal", tol, errors)


def _trig_points(base: PQBase) -> list[float]:
    # stay inside the small-family series radius, stencil shifts included
    reach = min(2.0, 0.8 * exp_radius(base) / base.p)
    return [z for z in _linspace(-reach, reach, 21) if z != 0.0]


def _suite_trig(base: PQBase, grid: GridConfig,
                trunc: SeriesTruncation) -> CheckResult:
    """cos(z) Cos(z) + sin(z) Sin(z) = 1 and sin(z) Cos(z) = cos(z) Sin(z)."""
    tol = 1e-10
    errors = []
    for z in _trig_points(base):
        c = trig_eval(TrigKind.COS_SMALL, base, z, trunc)
        s = trig_eval(TrigKind.SIN_SMALL, base, z, trunc)
        C = trig_eval(TrigKind.COS_BIG, base, z, trunc)
        S = trig_eval(TrigKind.SIN_BIG, base, z, trunc)
        errors.append((abs(c * C + s * S - 1.0), f"pythagorean at z = {z:.6g}"))
        errors.append((abs(s * C - c * S), f"cross at z = {z:.6g}"))
    return _result("trig", tol, errors)


def _suite_hyperbolic(base: PQBase, grid: GridConfig,
                      trunc: SeriesTruncation) -> CheckResult:
    """cosh(z) Cosh(z) - sinh(z) Sinh(z) = 1 and sinh(z) Cosh(z) = cosh(z) Sinh(z)."""
    tol = 1e-10
    errors = []
    for z in _trig_points(base):
        c = trig_eval(TrigKind.COSH_SMALL, base, z, trunc)
        s = trig_eval(TrigKind.SINH_SMALL, base, z, trunc)
        C = trig_eval(TrigKind.COSH_BIG, base, z, trunc)
        S = trig_eval(TrigKind.SINH_BIG, base, z, trunc)
        errors.append((abs(c * C - s * S - 1.0), f"pythagorean at z = {z:.6g}"))
        errors.append((abs(s * C - c * S), f"cross at z = {z:.6g}"))
    return _result("hyperbolic", tol, errors)


def _suite_gamma_recurrence(base: PQBase, grid: GridConfig,
                            trunc: SeriesTruncation) -> CheckResult:
    """Gamma(z+1) = [z] Gamma(z) for both kinds, integer and half-integer z."""
    tol = 1e-6
    errors = []
    for name, gamma in (("first", gamma_first), ("second", gamma_second)):
        for z in (0.5, 1.5, 2.5, 3.0):
            gz = gamma(base, z, grid, trunc)
            gz1 = gamma(base, z + 1.0, grid, trunc)
            rel = abs(gz1 - pq_number_real(base, z) * gz) / abs(gz1)
            errors.append((rel, f"{name} kind at z = {z}"))
    return _result("gamma-recurrence", tol, errors)


def _product_pairs(base: PQBase) -> list[tuple[str, Callable, Callable]]:
    def f1(t): return t * t + 1.0
    def g1(t): return exp_small(base, 0.4 * t)
    def f2(t): return t ** 3
    def g2(t): return trig_eval(TrigKind.COS_SMALL, base, 0.3 * t)
    return [("(t^2+1, e(0.4t))", f1, g1), ("(t^3, cos(0.3t))", f2, g2)]


def _suite_product_rules(base: PQBase, grid: GridConfig,
                         trunc: SeriesTruncation) -> CheckResult:
    """D(fg)(x) = f(px) Dg(x) + g(qx) Df(x) and the matching quotient rule
    D(f/g)(x) = [g(qx) Df(x) - f(qx) Dg(x)] / (g(px) g(qx))."""
    tol = 1e-12
    p, q = base.p, base.q
    errors = []
    for label, f, g in _product_pairs(base):
        for x in (0.2, 0.5, 1.0, 1.6):
            df = pq_derivative(f, base, x)
            dg = pq_derivative(g, base, x)
            lhs_p = pq_derivative(lambda t: f(t) * g(t), base, x)
            rhs_p = f(p * x) * dg + g(q * x) * df
            scale = max(1.0, abs(lhs_p))
            errors.append((abs(lhs_p - rhs_p) / scale,
                           f"product {label} at x = {x}"))
            lhs_q = pq_derivative(lambda t: f(t) / g(t), base, x)
            rhs_q = (g(q * x) * df - f(q * x) * dg) / (g(p * x) * g(q * x))
            scale = max(1.0, abs(lhs_q))
            errors.append((abs(lhs_q - rhs_q) / scale,
                           f"quotient {label} at x = {x}"))
    return _result("product-rules", tol, errors)


def _suite_transform_oracle(base: PQBase, grid: GridConfig,
                            trunc: SeriesTruncation) -> CheckResult:
    """Closed-form table against grid quadrature for one member of each
    supported family, at s comfortably above the validity threshold."""
    tol = 1e-7
    first, second = TransformKind.FIRST, TransformKind.SECOND
    cases = [
        (Monomial(3), first), (Power(0.5), first), (ExpSmall(0.3), first),
        (MonomialTimesExpSmall(2, 0.3), first), (Cos(0.5), first),
        (Sinh(0.4), first),
        (Monomial(2), second), (ExpBig(0.3), second), (BigCos(0.5), second),
        (BigCosh(0.4), second),
    ]
    errors = []
    for expr, kind in cases:
        s = max(1.5, 2.0 * numeric_s_min(expr, base, kind))
        tv = transform_table(expr, base, kind, grid, trunc).evaluate(s, trunc)
        nv = transform_numeric_expr(expr, base, s, kind, grid, trunc).value
        errors.append((abs(tv - nv) / abs(tv),
                       f"{kind.value} kind of {expr.describe()} at s = {s:.4g}"))
    return _result("transform-oracle", tol, errors)


def _suite_integration_rules(base: PQBase, grid: GridConfig,
                             trunc: SeriesTruncation) -> CheckResult:
    """Integration by parts (from the product rule and the fundamental
    theorem) and the dilation change of variable."""
    tol = 1e-9
    p, q = base.p, base.q
    errors = []
    for label, f, g, a in [
        ("(t^2, e(0.3t))", lambda t: t * t,
         lambda t: exp_small(base, 0.3 * t), 1.5),
        ("(t, cos(0.3t))", lambda t: t,
         lambda t: trig_eval(TrigKind.COS_SMALL, base, 0.3 * t), 1.0),
    ]:
        lhs = pq_integral_finite(
            lambda t: f(p * t) * pq_derivative(g, base, t), base, a, grid)
        rhs = f(a) * g(a) - f(0.0) * g(0.0) - pq_integral_finite(
            lambda t: g(q * t) * pq_derivative(f, base, t), base, a, grid)
        scale = max(1.0, abs(rhs))
        errors.append((abs(lhs - rhs) / scale, f"by parts {label} on [0, {a}]"))
    for label, f, c, b in [
        ("e(0.25t)", lambda t: exp_small(base, 0.25 * t), 1.7, 0.9),
        ("t^2 + t", lambda t: t * t + t, 0.5, 2.0),
    ]:
        lhs = pq_integral_finite(f, base, c * b, grid)
        rhs = c * pq_integral_finite(lambda u: f(c * u), base, b, grid)
        scale = max(1.0, abs(rhs))
        errors.append((abs(lhs - rhs) / scale,
                       f"change of variable {label}, c = {c}, b = {b}"))
    return _result("integration-rules", tol, errors)


def _suite_binomial(base: PQBase, grid: GridConfig,
                    trunc: SeriesTruncation) -> CheckResult:
    """1PHI0((a,b); z) = poch(b z / p) / poch(a z / p) in the q/p base,
    and the telescoping product corollary."""
    tol = 1e-10
    r = base.q / base.p
    z = 0.3
    errors = []
    chain = [(1.0, 0.6), (0.6, 0.2), (1.0, 0.2)]
    values = {}
    for a, b in chain:
        lhs = hypergeom_phi(HypergeomSpec(((a, b),), ()), base, z, trunc)
        rhs = (pochhammer_inf(r, b * z / base.p, trunc)
               / pochhammer_inf(r, a * z / base.p, trunc))
        values[(a, b)] = lhs
        scale = max(1.0, abs(rhs))
        errors.append((abs(lhs - rhs) / scale, f"theorem at (a, b) = ({a}, {b})"))
    corollary = abs(values[(1.0, 0.6)] * values[(0.6, 0.2)] - values[(1.0, 0.2)])
    errors.append((corollary, "product corollary (1, 0.6) * (0.6, 0.2) = (1, 0.2)"))
    return _result("binomial", tol, errors)


SUITES: dict[str, Callable[[PQBase, GridConfig, SeriesTruncation], CheckResult]] = {
    "exp-reciprocal": _suite_exp_reciprocal,
    "trig": _suite_trig,
    "hyperbolic": _suite_hyperbolic,
    "gamma-recurrence": _suite_gamma_recurrence,
    "product-rules": _suite_product_rules,
    "transform-oracle": _suite_transform_oracle,
    "integration-rules": _suite_integration_rules,
    "binomial": _suite_binomial,
}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str, base: PQBase, grid: GridConfig = DEFAULT_GRID,
              trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> CheckResult:
    """Run one named suite; unknown names list the valid ones."""
    try:
        fn = SUITES[name]
    except KeyError:
        raise PQDomainError(
            f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(base, grid, trunc)


__all__ = ["CheckResult", "SUITES", "suite_names", "run_suite"]
