"""Two-parameter basic arithmetic: (p,q)-numbers, factorials, binomials,
finite (p,q)-power products, and the normalized infinite Pochhammer product.

All higher modules are built on these primitives. The pair (p, q) plays the
role the single deformation parameter q plays in ordinary quantum calculus;
setting p = 1 recovers every classical q-object.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .accum import CompensatedSum
from .errors import PQDomainError, PQRangeError, TruncationError

# Factorials/binomials beyond this order overflow double precision long before
# they are useful; treat larger n as a caller bug.
MAX_ORDER = 10_000


class Regime(enum.Enum):
    """What the base supports.

    SERIES_ONLY: any p != q; power series and closed forms work, but the
    geometric integration grid is unavailable.
    FULL_GRID: 0 < q < p with p >= 1; the grid ratio q/p lies in (0, 1), so
    geometric-grid integrals and the transforms are available.
    """

    SERIES_ONLY = "series-only"
    FULL_GRID = "full-grid"


def _infer_regime(p: float, q: float) -> Regime:
    if 0.0 < q < p and p >= 1.0:
        return Regime.FULL_GRID
    return Regime.SERIES_ONLY


@dataclass(frozen=True)
class PQBase:
    """The parameter pair (p, q) plus the operating regime.

    Regime defaults to FULL_GRID whenever the pair qualifies (0 < q < p,
    p >= 1) and SERIES_ONLY otherwise; passing an explicit regime is
    validated against the same constraint.
    """

    p: float
    q: float
    regime: Regime = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise PQDomainError("p and q must be finite")
        if p == q:
            raise PQDomainError("p and q must differ (p == q collapses the difference quotient)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if self.regime is None:
            object.__setattr__(self, "regime", _infer_regime(p, q))
        elif self.regime is Regime.FULL_GRID and _infer_regime(p, q) is not Regime.FULL_GRID:
            raise PQDomainError(
                f"full-grid regime requires 0 < q < p and p >= 1; got p={p}, q={q}"
            )

    @property
    def ratio(self) -> float:
        """Grid ratio r = q/p; lies in (0, 1) in the full-grid regime."""
        return self.q / self.p

    def require_grid(self, what: str = "this operation") -> None:
        if self.regime is not Regime.FULL_GRID:
            raise PQDomainError(
                f"{what} needs the full-grid regime (0 < q < p, p >= 1); "
                f"got p={self.p}, q={self.q}"
            )


@dataclass(frozen=True)
class SeriesTruncation:
    """Stopping policy for series and product evaluation.

    A run of `consecutive_small` terms each below
    max(abs_tol, rel_tol * |partial sum|) ends the summation; exceeding
    `max_terms` without such a run raises TruncationError.
    """

    max_terms: int = 500
    abs_tol: float = 1e-15
    rel_tol: float = 1e-15
    consecutive_small: int = 3

    def __post_init__(self):
        if self.max_terms < 1:
            raise PQDomainError("max_terms must be at least 1")
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise PQDomainError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise PQDomainError("at least one of abs_tol, rel_tol must be positive")
        if self.consecutive_small < 1:
            raise PQDomainError("consecutive_small must be a positive integer")

    def threshold(self, partial: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(partial))


DEFAULT_TRUNCATION = SeriesTruncation()


class Sign(enum.Enum):
    """Sign convention of a (p,q)-power product: MINUS gives factors
    (x p^k - a q^k), PLUS gives (x p^k + a q^k)."""

    MINUS = "minus"
    PLUS = "plus"


def pq_number(base: PQBase, n: int) -> float:
    """[n]_{p,q} = (p^n - q^n)/(p - q) for integer n >= 0."""
    if n < 0 or n != int(n):
        raise PQDomainError(f"[n] needs a nonnegative integer n, got {n!r}")
    if n > MAX_ORDER:
        raise PQRangeError(f"n={n} exceeds the supported order cap {MAX_ORDER}")
    n = int(n)
    if n == 0:
        return 0.0
    # power-sum form sum_{k<n} p^k q^{n-1-k}: exact at p == q limit, no
    # cancellation for p ~ q (the difference-quotient form has both).
    p, q = base.p, base.q
    acc = 0.0
    for k in range(n):
        acc += p ** k * q ** (n - 1 - k)
    return acc


def pq_number_real(base: PQBase, z: float) -> float:
    """[z]_{p,q} = (p^z - q^z)/(p - q) for real z; needs p, q > 0."""
    if base.p <= 0 or base.q <= 0:
        raise PQDomainError("real-order [z] needs positive p and q")
    return (base.p ** z - base.q ** z) / (base.p - base.q)


def pq_factorial(base: PQBase, n: int) -> float:
    """[n]_{p,q}! = prod_{k=1}^{n} [k]_{p,q}, with [0]! = 1."""
    if n < 0 or n != int(n):
        raise PQDomainError(f"factorial needs a nonnegative integer n, got {n!r}")
    if n > MAX_ORDER:
        raise PQRangeError(f"n={n} exceeds the supported order cap {MAX_ORDER}")
    out = 1.0
    for k in range(1, int(n) + 1):
        out *= pq_number(base, k)
    return out


def pq_binomial(base: PQBase, n: int, k: int) -> float:
    """Gaussian-style (p,q)-binomial [n choose k] = [n]!/([k]! [n-k]!)."""
    if n < 0 or n != int(n):
        raise PQDomainError(f"binomial needs integer n >= 0, got n={n!r}")
    if k != int(k) or k < 0 or k > n:
        raise PQDomainError(f"binomial needs 0 <= k <= n, got k={k!r}, n={n}")
    if n > MAX_ORDER:
        raise PQRangeError(f"n={n} exceeds the supported order cap {MAX_ORDER}")
    n, k = int(n), int(k)
    k = min(k, n - k)
    # Ratio form prod_{j=1}^{k} [n-k+j]/[j] keeps intermediates balanced.
    out = 1.0
    for j in range(1, k + 1):
        out *= pq_number(base, n - k + j) / pq_number(base, j)
    return out


def pq_power_finite(base: PQBase, x: float, a: float, n: int, sign: Sign = Sign.MINUS) -> float:
    """Finite (p,q)-power prod_{k=0}^{n-1} (x p^k -/+ a q^k).

    The MINUS product generalizes (x - a)^n; at a = 0 it collapses to
    p^{n(n-1)/2} x^n.
    """
    if n < 0 or n != int(n):
        raise PQDomainError(f"power needs a nonnegative integer n, got {n!r}")
    out = 1.0
    p, q = base.p, base.q
    for k in range(int(n)):
        f = x * p ** k - a * q ** k if sign is Sign.MINUS else x * p ** k + a * q ** k
        out *= f
    return out


def pochhammer_inf(r: float, z, trunc: SeriesTruncation = DEFAULT_TRUNCATION):
    """Normalized infinite product prod_{k>=0} (1 - z r^k), |r| < 1.

    The single convergent product primitive: both exponential continuations,
    the Gamma functions, and the binomial-theorem identity reduce to it.
    Accepts real or complex z. Factors converge to 1 geometrically, so the
    stopping test monitors |z r^k| itself.
    """
    if not abs(r) < 1.0:
        raise PQDomainError(f"pochhammer_inf needs |r| < 1, got r={r!r}")
    out = 1.0 + 0j if isinstance(z, complex) else 1.0
    w = z
    small_run = 0
    for k in range(trunc.max_terms):
        out *= (1.0 - w)
        w = w * r
        if abs(w) < max(trunc.abs_tol, trunc.rel_tol):
            small_run += 1
            if small_run >= trunc.consecutive_small:
                # first-order tail correction: prod(1 - w r^j) ~ 1 - w/(1-r)
                out *= (1.0 - w / (1.0 - r))
                return out
        else:
            small_run = 0
    raise TruncationError(
        f"pochhammer product did not converge within {trunc.max_terms} factors",
        partial=out if not isinstance(out, complex) else abs(out),
        last_term=abs(w),
    )


def pq_power_infinite_partial(base: PQBase, a: float, b: float, sign: Sign, terms: int) -> float:
    """K-term partial product prod_{k=0}^{K-1} (a p^k -/+ b q^k).

    Divergent infinite (p,q)-powers are never summed to infinity; callers
    that need them (the integer Gamma route) rely on exact cancellation of
    the tails of two such products and ask for explicit partials.
    """
    if terms < 0 or terms != int(terms):
        raise PQDomainError(f"partial product needs K >= 0, got {terms!r}")
    out = 1.0
    p, q = base.p, base.q
    for k in range(int(terms)):
        f = a * p ** k - b * q ** k if sign is Sign.MINUS else a * p ** k + b * q ** k
        out *= f
    return out


def binom2(n: int) -> int:
    """Triangular exponent n(n-1)/2 that weights every series in this package."""
    return n * (n - 1) // 2


__all__ = [
    "MAX_ORDER",
    "Regime",
    "PQBase",
    "SeriesTruncation",
    "DEFAULT_TRUNCATION",
    "Sign",
    "pq_number",
    "pq_number_real",
    "pq_factorial",
    "pq_binomial",
    "pq_power_finite",
    "pochhammer_inf",
    "pq_power_infinite_partial",
    "binom2",
    "CompensatedSum",
]
