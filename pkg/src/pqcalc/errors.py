"""Exception hierarchy shared by all pqcalc modules.

Two families matter to callers: `PQDomainError` (bad inputs, unsupported
requests, analytic singularities -- CLI exit code 1) and
`PQConvergenceError` (a numerical process failed to converge -- exit code 2).
"""

from __future__ import annotations


class PQError(Exception):
    """Base class for all pqcalc errors."""


class PQDomainError(PQError, ValueError):
    """Invalid argument, parameter outside the operator's domain, or an
    analytically ill-posed request."""


class PQRangeError(PQDomainError):
    """Argument magnitude exceeds a documented implementation cap."""


class SingularityError(PQDomainError):
    """A closed form has a vanishing denominator factor.

    `factor_index` identifies which factor of the product vanished.
    """

    def __init__(self, message: str, factor_index: int):
        super().__init__(message)
        self.factor_index = factor_index


class PoleError(PQDomainError):
    """A product continuation was evaluated at (or too near) one of its
    poles; `factor_index` is the offending factor."""

    def __init__(self, message: str, factor_index: int):
        super().__init__(message)
        self.factor_index = factor_index


class UnsupportedTransformError(PQDomainError):
    """No closed-form rule exists for the requested (expression, kind) pair."""


class InversionError(PQDomainError):
    """A transform expression matched no inverse-table pattern.

    Carries the unmatched residual so callers can inspect what was left over.
    """

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class UnsupportedProblemError(PQDomainError):
    """The difference-equation solver has no rule for this problem shape."""


class PQConvergenceError(PQError, ArithmeticError):
    """A series or grid sum failed its convergence test."""


class TruncationError(PQConvergenceError):
    """Iteration budget exhausted before the smallness test passed.

    Carries the partial value accumulated so far, the magnitude of the last
    term, and (for two-sided grid sums) which tail failed.
    """

    def __init__(self, message: str, partial: float = 0.0,
                 last_term: float = 0.0, side: str | None = None):
        super().__init__(message)
        self.partial = partial
        self.last_term = last_term
        self.side = side


class DivergenceError(PQConvergenceError):
    """Terms grew in magnitude: the quantity diverges for these inputs."""

    def __init__(self, message: str, partial: float = 0.0, last_term: float = 0.0):
        super().__init__(message)
        self.partial = partial
        self.last_term = last_term
