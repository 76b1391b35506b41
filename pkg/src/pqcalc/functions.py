"""Special functions of the (p,q)-deformed calculus.

Two exponentials (a small one with finite convergence radius and an entire
big one), four circular/hyperbolic families built from each, the basic
hypergeometric evaluator, and two Gamma functions. Series are evaluated by
multiplicative term recurrences; beyond the small-series radius the
exponentials continue through the normalized infinite product.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .accum import CompensatedSum, ComplexCompensatedSum
from .arith import (DEFAULT_TRUNCATION, PQBase, SeriesTruncation, Sign, binom2,
                    pq_number, pq_power_infinite_partial)
from .calculus import DEFAULT_GRID, GridConfig, improper_info
from .errors import (DivergenceError, PQDomainError, PoleError,
                     TruncationError)

# Fraction of the small-series radius at which evaluation switches from the
# series to the product continuation.
PRODUCT_SWITCH = 0.75

# A continuation factor this close to zero (relative) means we are at a pole
# or a zero of the product; division is meaningless past it.
_POLE_TOL = 1e-12


class EvalInfo(NamedTuple):
    """Scalar result plus evaluation diagnostics."""

    value: float
    terms_used: int
    tail_estimate: float
    path: str


def exp_radius(base: PQBase) -> float:
    """Convergence radius of the small exponential series: p/(p-q) for
    p > q > 0, infinite otherwise (the roles of the two series swap)."""
    if base.p > base.q > 0:
        return base.p / (base.p - base.q)
    return math.inf


def _exp_series(base: PQBase, z, weight: float, trunc: SeriesTruncation):
    """sum_n weight^{n(n-1)/2} z^n / [n]!, by term recurrence."""
    term = 1.0 + 0j if isinstance(z, complex) else 1.0
    acc = ComplexCompensatedSum() if isinstance(z, complex) else CompensatedSum()
    acc.add(term)
    small_run = 0
    for n in range(trunc.max_terms):
        term = term * (weight ** n) * z / pq_number(base, n + 1)
        acc.add(term)
        mag = abs(term)
        if mag > 1e120 * (1.0 + abs(acc.value)):
            raise DivergenceError(
                "exponential series diverges at this argument",
                partial=abs(acc.value), last_term=mag,
            )
        if mag < trunc.threshold(abs(acc.value)):
            small_run += 1
            if small_run >= trunc.consecutive_small:
                return acc.value, n + 2, mag
        else:
            small_run = 0
    raise TruncationError(
        f"exponential series did not converge within {trunc.max_terms} terms",
        partial=abs(acc.value), last_term=abs(term),
    )


def _continuation_product(base: PQBase, w, trunc: SeriesTruncation,
                          detect_pole: bool):
    """prod_{k>=0} (1 - w r^k) with optional near-zero factor detection."""
    r = base.q / base.p
    out = 1.0 + 0j if isinstance(w, complex) else 1.0
    wk = w
    small_run = 0
    for k in range(trunc.max_terms):
        factor = 1.0 - wk
        if detect_pole and abs(factor) < _POLE_TOL * max(1.0, abs(wk)):
            raise PoleError(
                f"continuation product factor k={k} vanishes: the function has a "
                f"pole here (w r^k = {wk!r})",
                factor_index=k,
            )
        out *= factor
        wk = wk * r
        if abs(wk) < max(trunc.abs_tol, trunc.rel_tol):
            small_run += 1
            if small_run >= trunc.consecutive_small:
                out *= (1.0 - wk / (1.0 - r))
                return out, k + 2
        else:
            small_run = 0
    raise TruncationError(
        f"continuation product did not converge within {trunc.max_terms} factors",
        partial=abs(out), last_term=abs(wk),
    )


def _can_continue(base: PQBase) -> bool:
    return base.p > 0 and abs(base.q / base.p) < 1.0


def exp_small_info(base: PQBase, z, trunc: SeriesTruncation = DEFAULT_TRUNCATION,
                   method: str = "auto") -> EvalInfo:
    """Small exponential sum_n p^{n(n-1)/2} z^n / [n]!.

    Inside |z| < 0.75 * p/(p-q) the series is used; beyond, the analytic
    continuation 1 / prod_{k>=0}(1 - ((p-q)z/p) (q/p)^k), whose poles sit at
    z = (p/(p-q)) (p/q)^k on the positive axis (PoleError names k).
    """
    radius = exp_radius(base)
    use_product = method == "product" or (
        method == "auto" and _can_continue(base) and abs(z) >= PRODUCT_SWITCH * radius
    )
    if use_product:
        if not _can_continue(base):
            raise PQDomainError("product continuation needs 0 < q/p < 1")
        w = (base.p - base.q) * z / base.p
        denom, used = _continuation_product(base, w, trunc, detect_pole=True)
        value = 1.0 / denom
        return EvalInfo(value, used, 0.0, "product")
    value, used, last = _exp_series(base, z, base.p, trunc)
    return EvalInfo(value, used, last, "series")


def exp_small(base: PQBase, z, trunc: SeriesTruncation = DEFAULT_TRUNCATION,
              method: str = "auto"):
    return exp_small_info(base, z, trunc, method).value


def exp_big_info(base: PQBase, z, trunc: SeriesTruncation = DEFAULT_TRUNCATION,
                 method: str = "auto") -> EvalInfo:
    """Big exponential sum_n q^{n(n-1)/2} z^n / [n]! (entire for q < p).

    For large |z| the product form prod_{k>=0}(1 + ((p-q)z/p)(q/p)^k) is
    authoritative: it is sign-correct across the zeros on the negative axis
    where the alternating series cancels catastrophically.
    """
    radius = exp_radius(base)
    use_product = method == "product" or (
        method == "auto" and _can_continue(base) and abs(z) >= PRODUCT_SWITCH * radius
    )
    if use_product:
        if not _can_continue(base):
            raise PQDomainError("product evaluation needs 0 < q/p < 1")
        w = -(base.p - base.q) * z / base.p
        value, used = _continuation_product(base, w, trunc, detect_pole=False)
        return EvalInfo(value, used, 0.0, "product")
    value, used, last = _exp_series(base, z, base.q, trunc)
    return EvalInfo(value, used, last, "series")


def exp_big(base: PQBase, z, trunc: SeriesTruncation = DEFAULT_TRUNCATION,
            method: str = "auto"):
    return exp_big_info(base, z, trunc, method).value


def exp_big_zeros_start(base: PQBase) -> float:
    """First zero of the big exponential on the negative axis: E(-x) = 0 at
    x = p/(p-q), with the remaining zeros at x (p/q)^m. The transform
    engines anchor their grids on this lattice."""
    base.require_grid("the zero lattice")
    return base.p / (base.p - base.q)


class TrigKind(enum.Enum):
    COS_SMALL = "cos"
    SIN_SMALL = "sin"
    COS_BIG = "Cos"
    SIN_BIG = "Sin"
    COSH_SMALL = "cosh"
    SINH_SMALL = "sinh"
    COSH_BIG = "Cosh"
    SINH_BIG = "Sinh"


_TRIG_TABLE = {
    # kind: (small_family, odd_parity, circular)
    TrigKind.COS_SMALL: (True, False, True),
    TrigKind.SIN_SMALL: (True, True, True),
    TrigKind.COS_BIG: (False, False, True),
    TrigKind.SIN_BIG: (False, True, True),
    TrigKind.COSH_SMALL: (True, False, False),
    TrigKind.SINH_SMALL: (True, True, False),
    TrigKind.COSH_BIG: (False, False, False),
    TrigKind.SINH_BIG: (False, True, False),
}


def trig_eval_info(kind: TrigKind, base: PQBase, z: float,
                   trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> EvalInfo:
    """Circular/hyperbolic series of either weight family.

    Small-family kinds (weights p^{m(m-1)/2}) share the small exponential's
    finite radius and reject |z| beyond it; big-family kinds are entire.
    """
    small, odd, circular = _TRIG_TABLE[kind]
    if small:
        radius = exp_radius(base)
        if abs(z) >= radius:
            raise PQDomainError(
                f"{kind.value} series converges only for |z| < p/(p-q) = {radius}; "
                f"got |z| = {abs(z)}"
            )
    weight = base.p if small else base.q
    m0 = 1 if odd else 0
    term = z if odd else 1.0
    acc = CompensatedSum()
    acc.add(term)
    small_run = 0
    for n in range(trunc.max_terms):
        m = m0 + 2 * n
        # weight exponent increment C(m+2,2) - C(m,2) = 2m + 1
        term = term * weight ** (2 * m + 1) * z * z / (
            pq_number(base, m + 1) * pq_number(base, m + 2))
        if circular:
            term = -term
        acc.add(term)
        mag = abs(term)
        if mag < trunc.threshold(abs(acc.value)):
            small_run += 1
            if small_run >= trunc.consecutive_small:
                return EvalInfo(acc.value, n + 2, mag, "series")
        else:
            small_run = 0
    raise TruncationError(
        f"{kind.value} series did not converge within {trunc.max_terms} terms",
        partial=acc.value, last_term=abs(term),
    )


def trig_eval(kind: TrigKind, base: PQBase, z: float,
              trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    return trig_eval_info(kind, base, z, trunc).value


@dataclass(frozen=True)
class HypergeomSpec:
    """Parameter pairs of a basic hypergeometric sum rPHIs.

    Each (a_p, a_q) pair contributes the finite power
    prod_{k<n}(a_p p^k - a_q q^k) to the term numerator (denominator pairs
    likewise); r = len(numerator_pairs), s = len(denominator_pairs).
    """

    numerator_pairs: tuple[tuple[float, float], ...]
    denominator_pairs: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "numerator_pairs",
                           tuple((float(a), float(b)) for a, b in self.numerator_pairs))
        object.__setattr__(self, "denominator_pairs",
                           tuple((float(a), float(b)) for a, b in self.denominator_pairs))


def hypergeom_phi_info(spec: HypergeomSpec, base: PQBase, z: float,
                       trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> EvalInfo:
    """Evaluate the (p,q)-deformed rPHIs series by term recurrence.

    The term ratio is z * prod_i (a_ip p^n - a_iq q^n) /
    [prod_j (b_jp p^n - b_jq q^n) * (p^{n+1} - q^{n+1})], times the balancing
    factor [(-1) (q/p)^n]^{1+s-r}.
    """
    p, q = base.p, base.q
    balance = 1 + len(spec.denominator_pairs) - len(spec.numerator_pairs)
    term = 1.0
    acc = CompensatedSum()
    acc.add(term)
    small_run = 0
    growth_run = 0
    prev_mag = 1.0
    for n in range(trunc.max_terms):
        num = 1.0
        for ap, aq in spec.numerator_pairs:
            num *= ap * p ** n - aq * q ** n
        den = p ** (n + 1) - q ** (n + 1)
        for bp, bq in spec.denominator_pairs:
            f = bp * p ** n - bq * q ** n
            if f == 0.0:
                raise PQDomainError(
                    f"denominator pair ({bp}, {bq}) vanishes at term n={n}")
            den *= f
        ratio = z * num / den
        if balance:
            ratio *= (-(base.ratio ** n)) ** balance if balance > 0 else \
                1.0 / ((-(base.ratio ** n)) ** (-balance))
        term = term * ratio
        acc.add(term)
        mag = abs(term)
        # geometric growth keeps |term| proportional to the partial sum,
        # so divergence must be detected as a sustained growth run
        growth_run = growth_run + 1 if mag > prev_mag else 0
        prev_mag = mag
        if not math.isfinite(mag) or growth_run >= 60:
            raise DivergenceError(
                "hypergeometric series diverges for these parameters",
                partial=acc.value, last_term=mag,
            )
        if mag < trunc.threshold(abs(acc.value)):
            small_run += 1
            if small_run >= trunc.consecutive_small:
                return EvalInfo(acc.value, n + 2, mag, "series")
        else:
            small_run = 0
    raise TruncationError(
        f"hypergeometric series did not converge within {trunc.max_terms} terms",
        partial=acc.value, last_term=abs(term),
    )


def hypergeom_phi(spec: HypergeomSpec, base: PQBase, z: float,
                  trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    return hypergeom_phi_info(spec, base, z, trunc).value


def _is_integerish(z: float) -> bool:
    return abs(z - round(z)) <= 1e-12 * max(1.0, abs(z))


def gamma_first(base: PQBase, z: float, grid: GridConfig = DEFAULT_GRID,
                trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """First Gamma function; satisfies G(z+1) = [z] G(z) and G(n+1) = [n]!.

    Positive integer arguments take the exact product route (the tails of
    the two infinite powers in the definition cancel, leaving a finite
    partial product); other arguments take the weighted-integral route.
    """
    if z <= 0:
        raise PQDomainError(f"gamma is defined here for z > 0 only, got {z}")
    if _is_integerish(z):
        n = round(z) - 1
        num = pq_power_infinite_partial(base, base.p, base.q, Sign.MINUS, n)
        return num / (base.p - base.q) ** n
    return gamma_first_integral(base, z, grid, trunc)


def gamma_first_integral(base: PQBase, z: float, grid: GridConfig = DEFAULT_GRID,
                         trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """p^{z(z-1)/2} * integral_0^inf t^{z-1} E(-qt) dt on the aligned grid.

    The grid is anchored so that qt lands exactly on the kernel's zero
    lattice; at and beyond the first zero the integrand vanishes
    identically, inside it the kernel is positive. This is the only
    summation of the oscillating kernel that converges at double precision.
    """
    if z <= 0:
        raise PQDomainError(f"gamma is defined here for z > 0 only, got {z}")
    base.require_grid("the gamma integral route")
    value = first_kernel_integral(lambda t: t ** (z - 1.0), base, 1.0, grid, trunc).value
    return base.p ** (z * (z - 1.0) / 2.0) * value


def gamma_second(base: PQBase, z: float, grid: GridConfig = DEFAULT_GRID,
                 trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Second Gamma function q^{z(z-1)/2} * integral_0^inf t^{z-1} e(-pt) dt.

    The small-exponential kernel decays monotonically on the negative axis
    (the continuation product has no poles there), so the default grid
    anchor is fine. Same recurrence and integer values as gamma_first.
    """
    if z <= 0:
        raise PQDomainError(f"gamma is defined here for z > 0 only, got {z}")
    base.require_grid("the gamma integral route")

    def integrand(t: float) -> float:
        return t ** (z - 1.0) * exp_small(base, -base.p * t, trunc)

    value = improper_info(integrand, base, grid).value
    return base.q ** (z * (z - 1.0) / 2.0) * value


def first_kernel_integral(f, base: PQBase, s: float, grid: GridConfig = DEFAULT_GRID,
                          trunc: SeriesTruncation = DEFAULT_TRUNCATION):
    """integral_0^inf f(t) E(-q s t) dt on the grid anchored to the kernel zeros.

    Shared by the gamma integral route and the first-kind transform. The
    cutoff t0 = p/((p-q) q s) is the first kernel zero; every aligned grid
    point at or beyond t0 is also a zero, so those terms are exactly 0 and
    f is never evaluated there. Returns the GridSumInfo of the sum.
    """
    if s <= 0:
        raise PQDomainError(f"kernel scale s must be positive, got {s}")
    t0 = exp_big_zeros_start(base) / (base.q * s)
    cut = t0 * (1.0 - 1e-9)

    def integrand(t: float) -> float:
        if t >= cut:
            return 0.0
        return f(t) * exp_big(base, -base.q * s * t, trunc)

    # anchor = p * t0 puts the j = 0 grid point exactly on the first zero
    return improper_info(integrand, base, grid, anchor=base.p * t0)


__all__ = [
    "EvalInfo",
    "PRODUCT_SWITCH",
    "exp_radius",
    "exp_small",
    "exp_small_info",
    "exp_big",
    "exp_big_info",
    "exp_big_zeros_start",
    "TrigKind",
    "trig_eval",
    "trig_eval_info",
    "HypergeomSpec",
    "hypergeom_phi",
    "hypergeom_phi_info",
    "gamma_first",
    "gamma_first_integral",
    "gamma_second",
    "first_kernel_integral",
]
