"""The two deformed Laplace transforms.

Numeric engines over the improper geometric grid (first kind with the
kernel-zero-aligned anchor, second kind with joint-product integrands for
the entire-exponential families), a symbolic closed-form table with its
pattern-matching inverse, and the scaling / derivative-of-transform /
transform-of-derivative rules.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Callable

from .accum import CompensatedSum
from .arith import (DEFAULT_TRUNCATION, PQBase, SeriesTruncation, binom2,
                    pq_factorial)
from .calculus import (DEFAULT_GRID, GridConfig, GridSumInfo, improper_info,
                       pq_derivative_iterated)
from .errors import (DivergenceError, InversionError, PQDomainError,
                     PQRangeError, PoleError, TruncationError,
                     UnsupportedTransformError)
from .expressions import (BigCos, BigCosh, BigSin, BigSinh, Const, Cos, Cosh,
                          ExpBig, ExpSmall, FunctionExpr, Monomial,
                          MonomialTimesExpBig, MonomialTimesExpSmall, Power,
                          Sin, Sinh, Sum, combine)
from .functions import exp_small, first_kernel_integral, gamma_first, gamma_second

_ROOT_TOL = 1e-9


class TransformKind(enum.Enum):
    FIRST = "first"
    SECOND = "second"


def _kernel_base(base: PQBase, kind: TransformKind) -> float:
    """p for the first kind, q for the second; the symbol every closed form
    is written in."""
    return base.p if kind is TransformKind.FIRST else base.q


@dataclass(frozen=True)
class TransformExprBase:
    """Base of the s-domain closed forms; every value carries its validity
    half-line s > s_min."""

    def evaluate(self, s: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class RationalBasic(TransformExprBase):
    """scale / prod_k (s - roots[k]).

    Roots are stored sorted descending (canonical form: factors ordered so
    matching is deterministic); the scale is the coefficient once every
    factor's leading s-coefficient is normalized to 1. An empty root tuple
    is the constant `scale`.
    """

    scale: float
    roots: tuple[float, ...] = ()
    s_min: float = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "roots",
                           tuple(sorted((float(r) for r in self.roots), reverse=True)))
        if self.s_min is None:
            object.__setattr__(self, "s_min", max((0.0, *self.roots), default=0.0))
        else:
            object.__setattr__(self, "s_min", float(self.s_min))

    def evaluate(self, s, trunc=DEFAULT_TRUNCATION):
        out = self.scale
        for k, r in enumerate(self.roots):
            d = s - r
            if abs(d) < 1e-300:
                raise PoleError(f"evaluation at the pole s = {r}", factor_index=k)
            out /= d
        return out

    def describe(self):
        if not self.roots:
            return _fmt(self.scale)
        zeros = sum(1 for r in self.roots if r == 0.0)
        factors = []
        if zeros:
            factors.append("s" if zeros == 1 else f"s^{zeros}")
        for r in self.roots:
            if r != 0.0:
                factors.append(f"(s - {_fmt(r)})" if r > 0 else f"(s + {_fmt(-r)})")
        den = "*".join(factors)
        if len(factors) > 1:
            den = f"({den})"
        return f"{_fmt(self.scale)}/{den}"

    def to_dict(self):
        return {"kind": "rational", "scale": self.scale,
                "roots": list(self.roots), "s_min": self.s_min}


@dataclass(frozen=True)
class PowerLaw(TransformExprBase):
    """scale * s^(-power) for real power > 0; the t^alpha image."""

    scale: float
    power: float
    s_min: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "s_min", float(self.s_min))
        if self.power <= 0:
            raise PQDomainError(f"power-law exponent must be positive, got {self.power}")

    def evaluate(self, s, trunc=DEFAULT_TRUNCATION):
        if s <= 0:
            raise PQDomainError(f"power law needs s > 0, got {s}")
        return self.scale * s ** (-self.power)

    def describe(self):
        return f"{_fmt(self.scale)}/s^{_fmt(self.power)}"

    def to_dict(self):
        return {"kind": "power_law", "scale": self.scale,
                "power": self.power, "s_min": self.s_min}


@dataclass(frozen=True)
class Quadratic(TransformExprBase):
    """(num_s_coeff * s + num_const) / ((base_scale * s)^2 + denom_sign * a^2).

    The trig/hyperbolic image: denom_sign +1 for circular (no real poles),
    -1 for hyperbolic (poles at +-a/base_scale). a > 0; odd functions carry
    their sign in num_const.
    """

    num_s_coeff: float
    num_const: float
    base_scale: float
    a: float
    denom_sign: int = 1
    s_min: float = None  # type: ignore[assignment]

    def __post_init__(self):
        for f in ("num_s_coeff", "num_const", "base_scale", "a"):
            object.__setattr__(self, f, float(getattr(self, f)))
        if self.base_scale <= 0:
            raise PQDomainError("quadratic base_scale must be positive")
        if self.a <= 0:
            raise PQDomainError("quadratic frequency a must be positive")
        if self.denom_sign not in (1, -1):
            raise PQDomainError("denom_sign must be +1 or -1")
        if self.s_min is None:
            default = 0.0 if self.denom_sign == 1 else self.a / self.base_scale
            object.__setattr__(self, "s_min", default)
        else:
            object.__setattr__(self, "s_min", float(self.s_min))

    def evaluate(self, s, trunc=DEFAULT_TRUNCATION):
        den = (self.base_scale * s) ** 2 + self.denom_sign * self.a ** 2
        if abs(den) < 1e-300:
            raise PoleError(f"evaluation at the pole s = {abs(s)}", factor_index=0)
        return (self.num_s_coeff * s + self.num_const) / den

    def describe(self):
        num_parts = []
        if self.num_s_coeff:
            num_parts.append(f"{_fmt(self.num_s_coeff)}*s")
        if self.num_const or not num_parts:
            num_parts.append(_fmt(self.num_const))
        num = " + ".join(num_parts)
        sign = "+" if self.denom_sign == 1 else "-"
        return (f"({num})/(({_fmt(self.base_scale)}*s)^2 "
                f"{sign} {_fmt(self.a ** 2)})")

    def to_dict(self):
        return {"kind": "quadratic", "num_s_coeff": self.num_s_coeff,
                "num_const": self.num_const, "base_scale": self.base_scale,
                "a": self.a, "denom_sign": self.denom_sign, "s_min": self.s_min}


@dataclass(frozen=True)
class SeriesRule(TransformExprBase):
    """sum_n weight_ratio^binom(n,2) * arg_scale^n * s^(-n-1).

    The image of the entire exponential under the opposite-weight kernel.
    weight_ratio < 1 converges for every s > 0; weight_ratio > 1 is a
    formal series with no convergent region (evaluation raises).
    """

    weight_ratio: float
    arg_scale: float
    s_min: float = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "weight_ratio", float(self.weight_ratio))
        object.__setattr__(self, "arg_scale", float(self.arg_scale))
        if self.weight_ratio <= 0:
            raise PQDomainError("series weight ratio must be positive")
        if self.s_min is None:
            object.__setattr__(self, "s_min",
                               0.0 if self.weight_ratio < 1.0 else math.inf)
        else:
            object.__setattr__(self, "s_min", float(self.s_min))

    def coefficient(self, n: int) -> float:
        """The s^(-n-1) coefficient."""
        return self.weight_ratio ** binom2(n) * self.arg_scale ** n

    def evaluate(self, s, trunc=DEFAULT_TRUNCATION):
        if s <= 0:
            raise PQDomainError(f"series rule needs s > 0, got {s}")
        term = 1.0 / s
        acc = CompensatedSum()
        acc.add(term)
        small_run = 0
        growth_run = 0
        prev_mag = abs(term)
        for n in range(trunc.max_terms):
            term = term * self.weight_ratio ** n * self.arg_scale / s
            acc.add(term)
            mag = abs(term)
            # geometric growth keeps |term| proportional to the partial sum,
            # so divergence must be detected as a sustained growth run
            growth_run = growth_run + 1 if mag > prev_mag else 0
            prev_mag = mag
            if not math.isfinite(mag) or growth_run >= 60:
                raise DivergenceError(
                    "series rule diverges at this s"
                    + ("; the rule is formal with no convergent region"
                       if self.weight_ratio >= 1.0 else ""),
                    partial=acc.value, last_term=mag,
                )
            if mag < trunc.threshold(abs(acc.value)):
                small_run += 1
                if small_run >= trunc.consecutive_small:
                    return acc.value
            else:
                small_run = 0
        raise TruncationError(
            f"series rule did not converge within {trunc.max_terms} terms",
            partial=acc.value, last_term=abs(term),
        )

    def describe(self):
        return (f"sum_n {_fmt(self.weight_ratio)}^binom(n,2) * "
                f"({_fmt(self.arg_scale)})^n / s^(n+1)")

    def to_dict(self):
        return {"kind": "series_rule", "weight_ratio": self.weight_ratio,
                "arg_scale": self.arg_scale, "s_min": self.s_min}


@dataclass(frozen=True)
class TransformSum(TransformExprBase):
    """Linear combination of transform expressions; flattened, zero
    coefficients dropped."""

    terms: tuple[tuple[float, TransformExprBase], ...]

    def __post_init__(self):
        flat: list[tuple[float, TransformExprBase]] = []

        def push(coeff: float, expr: TransformExprBase):
            if isinstance(expr, TransformSum):
                for c, e in expr.terms:
                    push(coeff * c, e)
            elif coeff != 0.0:
                flat.append((float(coeff), expr))

        for c, e in self.terms:
            push(float(c), e)
        object.__setattr__(self, "terms", tuple(flat))

    @property
    def s_min(self) -> float:
        return max((e.s_min for _, e in self.terms), default=0.0)

    def evaluate(self, s, trunc=DEFAULT_TRUNCATION):
        return math.fsum(c * e.evaluate(s, trunc) for c, e in self.terms)

    def describe(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (c, e) in enumerate(self.terms):
            body = e.describe()
            sign = "-" if c < 0 else ("+" if i else "")
            mag = abs(c)
            piece = body if mag == 1.0 else f"{_fmt(mag)}*[{body}]"
            parts.append(f"{sign} {piece}" if i else f"{sign}{piece}")
        return " ".join(parts)

    def to_dict(self):
        return {"kind": "transform_sum",
                "terms": [[c, e.to_dict()] for c, e in self.terms]}


TransformExpr = TransformExprBase


def combine_transforms(terms: list[tuple[float, TransformExprBase]]) -> TransformExprBase:
    """Simplify a linear combination of transform expressions."""
    s = TransformSum(tuple(terms))
    if not s.terms:
        return RationalBasic(0.0, ())
    if len(s.terms) == 1 and s.terms[0][0] == 1.0:
        return s.terms[0][1]
    return s


def eval_transform_expr(texpr: TransformExprBase, s: float,
                        trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    return texpr.evaluate(s, trunc)


# --- closed-form table -------------------------------------------------

def _monomial_scale(base: PQBase, n: int, kind: TransformKind) -> float:
    b = _kernel_base(base, kind)
    return pq_factorial(base, n) / b ** binom2(n + 1)


def _ladder_roots(base: PQBase, n: int, a: float, kind: TransformKind) -> tuple[float, ...]:
    """Poles of the t^n exp(at) image: a ladder of n+1 geometrically spaced
    roots collapsing to a/p (or a/q) at n = 0."""
    p, q = base.p, base.q
    if kind is TransformKind.FIRST:
        return tuple(a * q ** (n - k) / p ** (n + 1 - k) for k in range(n + 1))
    return tuple(a * p ** (n - k) / q ** (n + 1 - k) for k in range(n + 1))


def _power_scale(base: PQBase, alpha: float, kind: TransformKind,
                 grid: GridConfig, trunc: SeriesTruncation) -> float:
    if kind is TransformKind.FIRST:
        g = gamma_first(base, alpha + 1.0, grid, trunc)
        return g / base.p ** (alpha * (alpha + 1.0) / 2.0)
    g = gamma_second(base, alpha + 1.0, grid, trunc)
    return g / base.q ** (alpha * (alpha + 1.0) / 2.0)


def transform_table(expr: FunctionExpr, base: PQBase, kind: TransformKind,
                    grid: GridConfig = DEFAULT_GRID,
                    trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> TransformExprBase:
    """Closed-form transform of a supported expression, with validity line.

    Families outside the requested kind's table (big trig under the first
    kind, small trig and monomial-times-small-exp under the second) raise
    UnsupportedTransformError; the entire exponential opposite its kernel
    yields a SeriesRule (first kind convergent, second kind formal).
    """
    p, q = base.p, base.q
    first = kind is TransformKind.FIRST
    b = _kernel_base(base, kind)

    if isinstance(expr, Sum):
        return combine_transforms(
            [(c, transform_table(e, base, kind, grid, trunc)) for c, e in expr.terms])
    if isinstance(expr, Const):
        return RationalBasic(expr.value, (0.0,))
    if isinstance(expr, Monomial):
        return RationalBasic(_monomial_scale(base, expr.n, kind), (0.0,) * (expr.n + 1))
    if isinstance(expr, Power):
        return PowerLaw(_power_scale(base, expr.alpha, kind, grid, trunc),
                        expr.alpha + 1.0)
    if isinstance(expr, ExpSmall):
        if first:
            return RationalBasic(1.0, (expr.a / p,))
        return SeriesRule(p / q, expr.a / q)
    if isinstance(expr, ExpBig):
        if first:
            return SeriesRule(q / p, expr.a / p)
        return RationalBasic(1.0, (expr.a / q,), s_min=abs(expr.a) / q)
    if isinstance(expr, MonomialTimesExpSmall) and first:
        return RationalBasic(_monomial_scale(base, expr.n, kind),
                             _ladder_roots(base, expr.n, expr.a, kind))
    if isinstance(expr, MonomialTimesExpBig) and not first:
        roots = _ladder_roots(base, expr.n, expr.a, kind)
        return RationalBasic(_monomial_scale(base, expr.n, kind), roots,
                             s_min=max(abs(r) for r in roots))
    if isinstance(expr, (Cos, Sin, Cosh, Sinh)) and first:
        if expr.a == 0.0:
            const = 0.0 if isinstance(expr, (Sin, Sinh)) else 1.0
            return RationalBasic(const, (0.0,))
        circ = isinstance(expr, (Cos, Sin))
        sign = 1 if circ else -1
        if isinstance(expr, (Cos, Cosh)):
            return Quadratic(p * p, 0.0, p, abs(expr.a), sign)
        return Quadratic(0.0, p * expr.a, p, abs(expr.a), sign)
    if isinstance(expr, (BigCos, BigSin, BigCosh, BigSinh)) and not first:
        if expr.a == 0.0:
            const = 0.0 if isinstance(expr, (BigSin, BigSinh)) else 1.0
            return RationalBasic(const, (0.0,))
        circ = isinstance(expr, (BigCos, BigSin))
        sign = 1 if circ else -1
        aa = abs(expr.a)
        if isinstance(expr, (BigCos, BigCosh)):
            return Quadratic(q * q, 0.0, q, aa, sign, s_min=aa / q)
        return Quadratic(0.0, q * expr.a, q, aa, sign, s_min=aa / q)
    raise UnsupportedTransformError(
        f"{expr.describe()} has no {kind.value}-kind table entry")


# --- numeric engines ----------------------------------------------------

def transform_numeric_info(f: Callable[[float], float], base: PQBase, s: float,
                           kind: TransformKind, grid: GridConfig = DEFAULT_GRID,
                           trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> GridSumInfo:
    """Grid quadrature of f against the kind's kernel, with diagnostics.

    First kind: the grid is anchored on the kernel's zero lattice (the sole
    summation of the oscillating kernel that converges in floats); second
    kind: default anchor, monotone kernel. Non-decaying tails raise
    DivergenceError via the grid sum's built-in tail test.
    """
    if s <= 0:
        raise PQDomainError(f"transform evaluation needs s > 0, got {s}")
    base.require_grid("the numeric transform")
    if kind is TransformKind.FIRST:
        return first_kernel_integral(f, base, s, grid, trunc)

    def integrand(t: float) -> float:
        return f(t) * exp_small(base, -base.p * s * t, trunc)

    return improper_info(integrand, base, grid)


def transform_numeric(f: Callable[[float], float], base: PQBase, s: float,
                      kind: TransformKind, grid: GridConfig = DEFAULT_GRID,
                      trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    return transform_numeric_info(f, base, s, kind, grid, trunc).value


def numeric_s_min(expr: FunctionExpr, base: PQBase, kind: TransformKind) -> float:
    """Quadrature-convergence threshold of the family-aware numeric engine.

    Finite where the grid sum converges absolutely: exceeds the table's
    analytic s_min for the small-exponential families under the first kind
    (the whole grid must stay inside the series radius) and matches the
    pole ladder for the entire families under the second kind. Infinite
    means no s makes the integral converge. Families the engine cannot
    evaluate at all raise UnsupportedTransformError.
    """
    p, q = base.p, base.q
    first = kind is TransformKind.FIRST
    if isinstance(expr, Sum):
        return max((numeric_s_min(e, base, kind) for _, e in expr.terms), default=0.0)
    if isinstance(expr, (Const, Monomial, Power)):
        return 0.0
    if isinstance(expr, (ExpSmall, MonomialTimesExpSmall)):
        if first:
            return max(0.0, expr.a / q)
        return 0.0 if expr.a < 0 else math.inf
    if isinstance(expr, (Cos, Sin, Cosh, Sinh)):
        if first:
            return abs(expr.a) / q
        raise UnsupportedTransformError(
            f"{expr.describe()} cannot be evaluated beyond its series radius; "
            "the second-kind integral needs the whole positive axis")
    if isinstance(expr, ExpBig):
        return 0.0 if first else abs(expr.a) / q
    if isinstance(expr, MonomialTimesExpBig):
        return 0.0 if first else (abs(expr.a) / q) * (p / q) ** expr.n
    if isinstance(expr, (BigCos, BigSin, BigCosh, BigSinh)):
        if first:
            raise UnsupportedTransformError(
                f"{expr.describe()} has no stable first-kind quadrature here")
        return abs(expr.a) / q
    raise UnsupportedTransformError(f"unrecognized expression {expr!r}")


def _ratio_product(base: PQBase, alpha, beta: float, t: float,
                   trunc: SeriesTruncation):
    """prod_k (1 + alpha t r^k) / (1 + beta t r^k), factors paired so the
    partial products never overflow even when the numerator alone would.
    alpha may be complex (circular big trig)."""
    r = base.q / base.p
    out = 1.0 + 0j if isinstance(alpha, complex) else 1.0
    ak = alpha * t
    bk = beta * t
    for _ in range(trunc.max_terms):
        den = 1.0 + bk
        if abs(den) < 1e-300:
            raise PoleError("joint-product denominator factor vanished", factor_index=0)
        out *= (1.0 + ak) / den
        ak *= r
        bk *= r
        if abs(ak) < 1e-16 and abs(bk) < 1e-16:
            out *= 1.0 + (ak - bk) / (1.0 - r)
            return out
    raise TruncationError(
        f"joint product did not converge within {trunc.max_terms} factors",
        partial=abs(out), last_term=max(abs(ak), abs(bk)),
    )


def _second_big_integrand(expr: FunctionExpr, base: PQBase, s: float,
                          trunc: SeriesTruncation) -> Callable[[float], float]:
    """Integrand f(t) * e(-pst) for the entire-exponential families, as one
    joint product: the separate factors overflow/underflow long before the
    tail test can stop the sum."""
    p, q = base.p, base.q
    beta = (p - q) * s

    if isinstance(expr, (ExpBig, MonomialTimesExpBig)):
        n = expr.n if isinstance(expr, MonomialTimesExpBig) else 0
        alpha = (p - q) * expr.a / p

        def integrand(t: float) -> float:
            return t ** n * _ratio_product(base, alpha, beta, t, trunc)

        return integrand

    if isinstance(expr, (BigCos, BigSin)):
        alpha = 1j * (p - q) * expr.a / p
        pick_im = isinstance(expr, BigSin)

        def integrand(t: float) -> float:
            v = _ratio_product(base, alpha, beta, t, trunc)
            return v.imag if pick_im else v.real

        return integrand

    # hyperbolic: even/odd combination of two real joint products
    alpha = (p - q) * expr.a / p
    pick_odd = isinstance(expr, BigSinh)

    def integrand(t: float) -> float:
        plus = _ratio_product(base, alpha, beta, t, trunc)
        minus = _ratio_product(base, -alpha, beta, t, trunc)
        return (plus - minus) / 2.0 if pick_odd else (plus + minus) / 2.0

    return integrand


def transform_numeric_expr(expr: FunctionExpr, base: PQBase, s: float,
                           kind: TransformKind, grid: GridConfig = DEFAULT_GRID,
                           trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> GridSumInfo:
    """Family-aware numeric transform: checks the quadrature threshold
    before summing and routes the second-kind entire families through
    joint-product integrands."""
    if s <= 0:
        raise PQDomainError(f"transform evaluation needs s > 0, got {s}")
    threshold = numeric_s_min(expr, base, kind)
    if math.isinf(threshold):
        raise PQRangeError(
            f"no s makes the {kind.value}-kind integral of {expr.describe()} converge "
            "(the integrand has poles or grows faster than the kernel decays)")
    if threshold > 0 and s <= threshold:
        raise PQRangeError(
            f"s = {s} is at or below the quadrature threshold {threshold} "
            f"for the {kind.value}-kind transform of {expr.describe()}")

    if isinstance(expr, Sum):
        value = 0.0
        terms = 0
        tail = 0.0
        for c, e in expr.terms:
            info = transform_numeric_expr(e, base, s, kind, grid, trunc)
            value += c * info.value
            terms += info.terms_used
            tail += abs(c) * info.tail_estimate
        return GridSumInfo(value, terms, tail)

    if kind is TransformKind.SECOND and isinstance(
            expr, (ExpBig, MonomialTimesExpBig, BigCos, BigSin, BigCosh, BigSinh)):
        base.require_grid("the numeric transform")
        integrand = _second_big_integrand(expr, base, s, trunc)
        return improper_info(integrand, base, grid)

    def f(t: float) -> float:
        return expr.evaluate(base, t, trunc)

    return transform_numeric_info(f, base, s, kind, grid, trunc)


# --- rules --------------------------------------------------------------

def _as_callable(F, trunc: SeriesTruncation) -> Callable[[float], float]:
    if isinstance(F, TransformExprBase):
        return lambda s: F.evaluate(s, trunc)
    if callable(F):
        return F
    raise PQDomainError(f"expected a TransformExpr or a callable, got {F!r}")


def scaling_apply(F, a: float):
    """Dilation rule: the image of f(at) is (1/a) F(s/a).

    TransformExpr inputs are rewritten to closed forms of the same shape;
    callables are wrapped. The validity half-line scales to |a| * s_min.
    """
    if a == 0:
        raise PQDomainError("dilation factor must be nonzero")
    a = float(a)
    if isinstance(F, RationalBasic):
        m = len(F.roots)
        return RationalBasic(F.scale * a ** (m - 1),
                             tuple(r * a for r in F.roots),
                             s_min=abs(a) * F.s_min)
    if isinstance(F, PowerLaw):
        if a < 0:
            raise PQDomainError("negative dilation of a fractional power law")
        return PowerLaw(F.scale * a ** (F.power - 1.0), F.power,
                        s_min=a * F.s_min)
    if isinstance(F, Quadratic):
        return Quadratic(F.num_s_coeff, a * F.num_const, F.base_scale,
                         abs(a) * F.a, F.denom_sign, s_min=abs(a) * F.s_min)
    if isinstance(F, SeriesRule):
        return SeriesRule(F.weight_ratio, a * F.arg_scale,
                          s_min=abs(a) * F.s_min)
    if isinstance(F, TransformSum):
        return combine_transforms([(c, scaling_apply(e, a)) for c, e in F.terms])
    if callable(F):
        return lambda s: F(s / a) / a
    raise PQDomainError(f"expected a TransformExpr or a callable, got {F!r}")


def derivative_of_transform(F, base: PQBase, n: int, s: float,
                            kind: TransformKind,
                            trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Image of t^n f(t) from the image F of f, evaluated at s.

    First kind: (-1)^n q^binom(n,2) D^n[F(s/q^n)]; second kind with p. The
    outer derivative is the exact multiplicative stencil, so F is evaluated
    at the points p^i q^j s / (q^n or p^n) only.
    """
    if n < 0 or n != int(n):
        raise PQDomainError(f"derivative order must be a nonnegative integer, got {n!r}")
    n = int(n)
    Fc = _as_callable(F, trunc)
    if n == 0:
        return Fc(s)
    if s <= 0:
        raise PQDomainError(f"stencil in s needs s > 0, got {s}")
    shift = (base.q if kind is TransformKind.FIRST else base.p) ** n
    weight = (base.q if kind is TransformKind.FIRST else base.p) ** binom2(n)

    def g(sigma: float) -> float:
        return Fc(sigma / shift)

    return (-1.0) ** n * weight * pq_derivative_iterated(g, base, n, s)


def transform_of_derivative(F_of_f, initial_derivs, base: PQBase, n: int,
                            s: float, kind: TransformKind,
                            trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Image of D^n f from the image of f and the derivative values at 0:

    s^n / b^binom(n+1,2) * F(s/b^n) - sum_{k<n} s^(n-1-k)/b^binom(n-k,2) * (D^k f)(0),
    with b = p (first kind) or q (second kind).
    """
    if n < 0 or n != int(n):
        raise PQDomainError(f"derivative order must be a nonnegative integer, got {n!r}")
    n = int(n)
    if len(initial_derivs) != n:
        raise PQDomainError(
            f"need exactly n = {n} initial derivative values, got {len(initial_derivs)}")
    if s <= 0:
        raise PQDomainError(f"transform rules need s > 0, got {s}")
    Fc = _as_callable(F_of_f, trunc)
    b = _kernel_base(base, kind)
    out = s ** n / b ** binom2(n + 1) * Fc(s / b ** n)
    for k in range(n):
        out -= s ** (n - 1 - k) / b ** binom2(n - k) * float(initial_derivs[k])
    return out


# --- inversion ----------------------------------------------------------

def _roots_match(actual: tuple[float, ...], predicted: tuple[float, ...]) -> float:
    """Worst relative mismatch between two descending root tuples."""
    worst = 0.0
    for x, y in zip(actual, predicted):
        scale = max(abs(x), abs(y), 1e-30)
        worst = max(worst, abs(x - y) / scale)
    return worst


def invert_by_table(F: TransformExprBase, base: PQBase, kind: TransformKind,
                    grid: GridConfig = DEFAULT_GRID,
                    trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> FunctionExpr:
    """Pattern-matching inverse over the closed-form table.

    Reconstructs the unique expression whose table image structurally
    equals F; unit coefficients are recovered exactly because the reference
    scale is recomputed through the identical expression sequence the table
    used. Unmatched shapes raise InversionError carrying the residual
    mismatch.
    """
    first = kind is TransformKind.FIRST
    b = _kernel_base(base, kind)

    if isinstance(F, TransformSum):
        parts: list[tuple[float, FunctionExpr]] = []
        for c, e in F.terms:
            parts.append((c, invert_by_table(e, base, kind, grid, trunc)))
        return combine(parts)

    if isinstance(F, RationalBasic):
        m = len(F.roots)
        if F.scale == 0.0:
            return Const(0.0)
        if m == 0:
            raise InversionError(
                "a constant is not the image of any table entry", residual=abs(F.scale))
        if all(r == 0.0 for r in F.roots):
            if m == 1:
                return combine([(F.scale, Const(1.0))])
            n = m - 1
            coeff = F.scale / _monomial_scale(base, n, kind)
            return combine([(coeff, Monomial(n))])
        if m == 1:
            a = b * F.roots[0]
            node = ExpSmall(a) if first else ExpBig(a)
            return combine([(F.scale, node)])
        # ladder match: the largest-magnitude root is a/p (first kind,
        # k = n) or a p^n/q^(n+1) (second kind, k = 0)
        n = m - 1
        anchor = max(F.roots, key=abs)
        if first:
            a = base.p * anchor
        else:
            a = anchor * base.q ** (n + 1) / base.p ** n
        predicted = tuple(sorted(_ladder_roots(base, n, a, kind), reverse=True))
        residual = _roots_match(F.roots, predicted)
        if residual > _ROOT_TOL:
            raise InversionError(
                f"root multiset {F.roots} matches no table pattern "
                f"(closest exponential ladder off by {residual:.3e})",
                residual=residual)
        coeff = F.scale / _monomial_scale(base, n, kind)
        node = MonomialTimesExpSmall(n, a) if first else MonomialTimesExpBig(n, a)
        return combine([(coeff, node)])

    if isinstance(F, PowerLaw):
        alpha = F.power - 1.0
        if alpha <= -1.0:
            raise InversionError(
                f"power law exponent {F.power} outside the table", residual=math.inf)
        ref = _power_scale(base, alpha, kind, grid, trunc)
        return combine([(F.scale / ref, Power(alpha))])

    if isinstance(F, Quadratic):
        if not math.isclose(F.base_scale, b, rel_tol=1e-12):
            raise InversionError(
                f"quadratic base scale {F.base_scale} is not the {kind.value}-kind "
                f"symbol {b}", residual=abs(F.base_scale - b))
        circ = F.denom_sign == 1
        if first:
            even_node = Cos(F.a) if circ else Cosh(F.a)
            odd_node = Sin(F.a) if circ else Sinh(F.a)
        else:
            even_node = BigCos(F.a) if circ else BigCosh(F.a)
            odd_node = BigSin(F.a) if circ else BigSinh(F.a)
        parts = []
        if F.num_s_coeff != 0.0:
            parts.append((F.num_s_coeff / (b * b), even_node))
        if F.num_const != 0.0:
            parts.append((F.num_const / (b * F.a), odd_node))
        if not parts:
            return Const(0.0)
        return combine(parts)

    if isinstance(F, SeriesRule):
        raise InversionError(
            "series rules are not invertible by the table "
            "(no closed-form preimage)", residual=math.inf)

    raise InversionError(f"unrecognized transform expression {F!r}", residual=math.inf)


# --- comparison and serialization ---------------------------------------

def transform_expr_close(x: TransformExprBase, y: TransformExprBase,
                         rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> bool:
    """Structural equality with float tolerance on parameters (shape must
    match exactly; sums compare after sorting by description)."""
    if isinstance(x, TransformSum) or isinstance(y, TransformSum):
        tx = x.terms if isinstance(x, TransformSum) else ((1.0, x),)
        ty = y.terms if isinstance(y, TransformSum) else ((1.0, y),)
        if len(tx) != len(ty):
            return False
        key = lambda item: item[1].describe()
        for (cx, ex), (cy, ey) in zip(sorted(tx, key=key), sorted(ty, key=key)):
            if not math.isclose(cx, cy, rel_tol=rel_tol, abs_tol=abs_tol):
                return False
            if not transform_expr_close(ex, ey, rel_tol, abs_tol):
                return False
        return True
    if type(x) is not type(y):
        return False
    dx, dy = x.to_dict(), y.to_dict()
    for k, vx in dx.items():
        vy = dy[k]
        if isinstance(vx, float):
            if math.isinf(vx) or math.isinf(vy):
                if vx != vy:
                    return False
            elif not math.isclose(vx, vy, rel_tol=rel_tol, abs_tol=abs_tol):
                return False
        elif isinstance(vx, list):
            if len(vx) != len(vy):
                return False
            for a_, b_ in zip(vx, vy):
                if not math.isclose(a_, b_, rel_tol=rel_tol, abs_tol=abs_tol):
                    return False
        elif vx != vy:
            return False
    return True


def transform_expr_from_dict(data: dict[str, Any]) -> TransformExprBase:
    """Inverse of to_dict for every transform expression shape."""
    if not isinstance(data, dict) or "kind" not in data:
        raise PQDomainError(f"transform dict needs a 'kind' field: {data!r}")
    kind = data["kind"]
    try:
        if kind == "rational":
            return RationalBasic(float(data["scale"]),
                                 tuple(float(r) for r in data["roots"]),
                                 s_min=float(data["s_min"]))
        if kind == "power_law":
            return PowerLaw(float(data["scale"]), float(data["power"]),
                            s_min=float(data["s_min"]))
        if kind == "quadratic":
            return Quadratic(float(data["num_s_coeff"]), float(data["num_const"]),
                             float(data["base_scale"]), float(data["a"]),
                             int(data["denom_sign"]), s_min=float(data["s_min"]))
        if kind == "series_rule":
            return SeriesRule(float(data["weight_ratio"]), float(data["arg_scale"]),
                              s_min=float(data["s_min"]))
        if kind == "transform_sum":
            return TransformSum(tuple(
                (float(c), transform_expr_from_dict(e)) for c, e in data["terms"]))
    except KeyError as exc:
        raise PQDomainError(f"transform kind {kind!r} needs field {exc}") from None
    raise PQDomainError(f"unknown transform expression kind {kind!r}")


def table_rows(kind: TransformKind) -> list[dict[str, str]]:
    """The closed-form table as display rows (family, image, validity)."""
    if kind is TransformKind.FIRST:
        return [
            {"family": "1", "image": "1/s", "validity": "s > 0"},
            {"family": "t^n", "image": "[n]!/(p^binom(n+1,2) s^(n+1))", "validity": "s > 0"},
            {"family": "t^alpha, alpha > -1",
             "image": "Gamma1(alpha+1)/(p^(alpha(alpha+1)/2) s^(alpha+1))", "validity": "s > 0"},
            {"family": "e(at)", "image": "p/(ps - a)", "validity": "s > a/p"},
            {"family": "t^n e(at)",
             "image": "[n]! / prod_k (p^(n+1-k) q^k s - a q^n), k = 0..n",
             "validity": "s > a/p"},
            {"family": "E(at)", "image": "sum_n (q/p)^binom(n,2) (a/p)^n / s^(n+1)",
             "validity": "s > 0 (series; no closed form)"},
            {"family": "cos(at)", "image": "p^2 s/((ps)^2 + a^2)", "validity": "s > 0"},
            {"family": "sin(at)", "image": "p a/((ps)^2 + a^2)", "validity": "s > 0"},
            {"family": "cosh(at)", "image": "p^2 s/((ps)^2 - a^2)", "validity": "s > |a|/p"},
            {"family": "sinh(at)", "image": "p a/((ps)^2 - a^2)", "validity": "s > |a|/p"},
        ]
    return [
        {"family": "1", "image": "1/s", "validity": "s > 0"},
        {"family": "t^n", "image": "[n]!/(q^binom(n+1,2) s^(n+1))", "validity": "s > 0"},
        {"family": "t^alpha, alpha > -1",
         "image": "Gamma2(alpha+1)/(q^(alpha(alpha+1)/2) s^(alpha+1))", "validity": "s > 0"},
        {"family": "E(at)", "image": "q/(qs - a)", "validity": "s > |a|/q"},
        {"family": "t^n E(at)",
         "image": "[n]! / prod_k (q^(n+1-k) p^k s - a p^n), k = 0..n",
         "validity": "s > (|a|/q)(p/q)^n"},
        {"family": "e(at)", "image": "sum_n (p/q)^binom(n,2) (a/q)^n / s^(n+1)",
         "validity": "formal series (no convergent region)"},
        {"family": "Cos(at)", "image": "q^2 s/((qs)^2 + a^2)", "validity": "s > |a|/q"},
        {"family": "Sin(at)", "image": "q a/((qs)^2 + a^2)", "validity": "s > |a|/q"},
        {"family": "Cosh(at)", "image": "q^2 s/((qs)^2 - a^2)", "validity": "s > |a|/q"},
        {"family": "Sinh(at)", "image": "q a/((qs)^2 - a^2)", "validity": "s > |a|/q"},
    ]


def _fmt(x: float) -> str:
    return repr(int(x)) if float(x).is_integer() and abs(x) < 1e15 else repr(float(x))


__all__ = [
    "TransformKind",
    "TransformExpr",
    "TransformExprBase",
    "RationalBasic",
    "PowerLaw",
    "Quadratic",
    "SeriesRule",
    "TransformSum",
    "combine_transforms",
    "eval_transform_expr",
    "transform_table",
    "transform_numeric",
    "transform_numeric_info",
    "transform_numeric_expr",
    "numeric_s_min",
    "scaling_apply",
    "derivative_of_transform",
    "transform_of_derivative",
    "invert_by_table",
    "transform_expr_close",
    "transform_expr_from_dict",
    "table_rows",
]
