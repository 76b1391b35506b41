"""Symbolic time-domain functions.

A small closed universe of expression nodes: the function families the
transform tables know how to handle, plus linear combinations. Nodes are
frozen dataclasses; they evaluate numerically, expose their first two series
coefficients (for initial-condition checks), and round-trip through plain
dicts for the service layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .arith import DEFAULT_TRUNCATION, PQBase, SeriesTruncation
from .errors import PQDomainError
from .functions import TrigKind, exp_big, exp_small, trig_eval


@dataclass(frozen=True)
class FunctionExpr:
    """Base class; concrete nodes implement the four hooks below."""

    def evaluate(self, base: PQBase, t: float,
                 trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
        raise NotImplementedError

    def taylor2(self, base: PQBase) -> tuple[float, float]:
        """(value at 0, linear series coefficient).

        The linear coefficient equals the value of the deformed derivative
        at 0, which is what initial-condition checks need.
        """
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(FunctionExpr):
    value: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return self.value

    def taylor2(self, base):
        return (self.value, 0.0)

    def describe(self):
        return _fmt(self.value)

    def to_dict(self):
        return {"kind": "const", "value": self.value}


@dataclass(frozen=True)
class Monomial(FunctionExpr):
    """t^n for integer n >= 0."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise PQDomainError(f"monomial degree must be a nonnegative integer, got {self.n}")

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return float(t) ** self.n

    def taylor2(self, base):
        if self.n == 0:
            return (1.0, 0.0)
        return (0.0, 1.0 if self.n == 1 else 0.0)

    def describe(self):
        return "1" if self.n == 0 else ("t" if self.n == 1 else f"t^{self.n}")

    def to_dict(self):
        return {"kind": "monomial", "n": self.n}


@dataclass(frozen=True)
class Power(FunctionExpr):
    """t^alpha for real alpha > -1, not necessarily an integer.

    alpha in (-1, 0) is integrable against the grid weight even though the
    value blows up at t = 0.
    """

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        if not self.alpha > -1.0:
            raise PQDomainError(f"power exponent must exceed -1, got {self.alpha}")

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        if t == 0:
            if self.alpha > 0:
                return 0.0
            if self.alpha == 0:
                return 1.0
            raise PQDomainError("t^alpha is singular at t = 0 for alpha < 0")
        if t < 0:
            raise PQDomainError("t^alpha is evaluated on t >= 0 only")
        return t ** self.alpha

    def taylor2(self, base):
        if self.alpha == 0.0:
            return (1.0, 0.0)
        if self.alpha == 1.0:
            return (0.0, 1.0)
        if self.alpha > 1.0:
            return (0.0, 0.0)
        raise PQDomainError(
            f"t^{self.alpha} has no finite derivative at 0 for alpha < 1")

    def describe(self):
        return f"t^{_fmt(self.alpha)}"

    def to_dict(self):
        return {"kind": "power", "alpha": self.alpha}


@dataclass(frozen=True)
class ExpSmall(FunctionExpr):
    """Small exponential e(a t)."""

    a: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return exp_small(base, self.a * t, trunc)

    def taylor2(self, base):
        return (1.0, self.a)

    def describe(self):
        return f"e({_coeff(self.a)}t)"

    def to_dict(self):
        return {"kind": "exp_small", "a": self.a}


@dataclass(frozen=True)
class ExpBig(FunctionExpr):
    """Big exponential E(a t)."""

    a: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return exp_big(base, self.a * t, trunc)

    def taylor2(self, base):
        return (1.0, self.a)

    def describe(self):
        return f"E({_coeff(self.a)}t)"

    def to_dict(self):
        return {"kind": "exp_big", "a": self.a}


def _trig_node(cls_name: str, kind: TrigKind, json_kind: str, display: str):
    """Build one frozen trig node class; all eight share the same shape."""

    odd = kind in (TrigKind.SIN_SMALL, TrigKind.SIN_BIG,
                   TrigKind.SINH_SMALL, TrigKind.SINH_BIG)

    @dataclass(frozen=True)
    class _Node(FunctionExpr):
        a: float

        def __post_init__(self):
            object.__setattr__(self, "a", float(self.a))

        def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
            return trig_eval(kind, base, self.a * t, trunc)

        def taylor2(self, base):
            return (0.0, self.a) if odd else (1.0, 0.0)

        def describe(self):
            return f"{display}({_coeff(self.a)}t)"

        def to_dict(self):
            return {"kind": json_kind, "a": self.a}

    _Node.__name__ = cls_name
    _Node.__qualname__ = cls_name
    _Node.trig_kind = kind
    return _Node


Cos = _trig_node("Cos", TrigKind.COS_SMALL, "cos_small", "cos")
Sin = _trig_node("Sin", TrigKind.SIN_SMALL, "sin_small", "sin")
BigCos = _trig_node("BigCos", TrigKind.COS_BIG, "cos_big", "Cos")
BigSin = _trig_node("BigSin", TrigKind.SIN_BIG, "sin_big", "Sin")
Cosh = _trig_node("Cosh", TrigKind.COSH_SMALL, "cosh_small", "cosh")
Sinh = _trig_node("Sinh", TrigKind.SINH_SMALL, "sinh_small", "sinh")
BigCosh = _trig_node("BigCosh", TrigKind.COSH_BIG, "cosh_big", "Cosh")
BigSinh = _trig_node("BigSinh", TrigKind.SINH_BIG, "sinh_big", "Sinh")


@dataclass(frozen=True)
class MonomialTimesExpSmall(FunctionExpr):
    """t^n e(a t)."""

    n: int
    a: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise PQDomainError(f"monomial degree must be a nonnegative integer, got {self.n}")
        object.__setattr__(self, "a", float(self.a))

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return float(t) ** self.n * exp_small(base, self.a * t, trunc)

    def taylor2(self, base):
        if self.n == 0:
            return (1.0, self.a)
        return (0.0, 1.0 if self.n == 1 else 0.0)

    def describe(self):
        head = Monomial(self.n).describe()
        return f"{head}*e({_coeff(self.a)}t)" if self.n else f"e({_coeff(self.a)}t)"

    def to_dict(self):
        return {"kind": "monomial_exp_small", "n": self.n, "a": self.a}


@dataclass(frozen=True)
class MonomialTimesExpBig(FunctionExpr):
    """t^n E(a t)."""

    n: int
    a: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise PQDomainError(f"monomial degree must be a nonnegative integer, got {self.n}")
        object.__setattr__(self, "a", float(self.a))

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return float(t) ** self.n * exp_big(base, self.a * t, trunc)

    def taylor2(self, base):
        if self.n == 0:
            return (1.0, self.a)
        return (0.0, 1.0 if self.n == 1 else 0.0)

    def describe(self):
        head = Monomial(self.n).describe()
        return f"{head}*E({_coeff(self.a)}t)" if self.n else f"E({_coeff(self.a)}t)"

    def to_dict(self):
        return {"kind": "monomial_exp_big", "n": self.n, "a": self.a}


@dataclass(frozen=True)
class Sum(FunctionExpr):
    """Linear combination sum_i c_i * f_i; nested sums are flattened and
    zero coefficients dropped on construction."""

    terms: tuple[tuple[float, FunctionExpr], ...]

    def __post_init__(self):
        flat: list[tuple[float, FunctionExpr]] = []

        def push(coeff: float, expr: FunctionExpr):
            if isinstance(expr, Sum):
                for c, e in expr.terms:
                    push(coeff * c, e)
            elif isinstance(expr, Const):
                if coeff * expr.value != 0.0:
                    flat.append((coeff * expr.value, Const(1.0)))
            elif coeff != 0.0:
                flat.append((float(coeff), expr))

        for c, e in self.terms:
            push(float(c), e)
        object.__setattr__(self, "terms", tuple(flat))

    def evaluate(self, base, t, trunc=DEFAULT_TRUNCATION):
        return math.fsum(c * e.evaluate(base, t, trunc) for c, e in self.terms)

    def taylor2(self, base):
        c0 = 0.0
        c1 = 0.0
        for c, e in self.terms:
            a0, a1 = e.taylor2(base)
            c0 += c * a0
            c1 += c * a1
        return (c0, c1)

    def describe(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (c, e) in enumerate(self.terms):
            body = e.describe()
            sign = "-" if c < 0 else ("+" if i else "")
            mag = abs(c)
            piece = body if mag == 1.0 and body != "1" else (
                _fmt(mag) if body == "1" else f"{_fmt(mag)}*{body}")
            parts.append(f"{sign} {piece}" if i else f"{sign}{piece}")
        return " ".join(parts)

    def to_dict(self):
        return {"kind": "sum",
                "terms": [[c, e.to_dict()] for c, e in self.terms]}


def combine(terms: list[tuple[float, FunctionExpr]]) -> FunctionExpr:
    """Simplify a linear combination: empty -> 0, a single unit-coefficient
    term -> the bare node, anything else -> a flattened Sum."""
    s = Sum(tuple(terms))
    if not s.terms:
        return Const(0.0)
    if len(s.terms) == 1:
        c, e = s.terms[0]
        if c == 1.0:
            return e
        if isinstance(e, Const):
            return Const(c * e.value)
    return s


_SIMPLE_NODES = {
    "const": (Const, ("value",)),
    "monomial": (Monomial, ("n",)),
    "power": (Power, ("alpha",)),
    "exp_small": (ExpSmall, ("a",)),
    "exp_big": (ExpBig, ("a",)),
    "cos_small": (Cos, ("a",)),
    "sin_small": (Sin, ("a",)),
    "cos_big": (BigCos, ("a",)),
    "sin_big": (BigSin, ("a",)),
    "cosh_small": (Cosh, ("a",)),
    "sinh_small": (Sinh, ("a",)),
    "cosh_big": (BigCosh, ("a",)),
    "sinh_big": (BigSinh, ("a",)),
    "monomial_exp_small": (MonomialTimesExpSmall, ("n", "a")),
    "monomial_exp_big": (MonomialTimesExpBig, ("n", "a")),
}


def expr_from_dict(data: dict[str, Any]) -> FunctionExpr:
    """Inverse of to_dict; raises PQDomainError on malformed input."""
    if not isinstance(data, dict) or "kind" not in data:
        raise PQDomainError(f"expression dict needs a 'kind' field: {data!r}")
    kind = data["kind"]
    if kind == "sum":
        raw = data.get("terms")
        if not isinstance(raw, list):
            raise PQDomainError("sum expression needs a 'terms' list")
        terms = []
        for item in raw:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise PQDomainError(f"sum term must be [coeff, expr]: {item!r}")
            terms.append((float(item[0]), expr_from_dict(item[1])))
        return Sum(tuple(terms))
    if kind not in _SIMPLE_NODES:
        raise PQDomainError(f"unknown expression kind {kind!r}")
    cls, fields = _SIMPLE_NODES[kind]
    try:
        kwargs = {}
        for f in fields:
            v = data[f]
            kwargs[f] = int(v) if f == "n" else float(v)
    except KeyError as exc:
        raise PQDomainError(f"expression kind {kind!r} needs field {exc}") from None
    return cls(**kwargs)


def expr_close(a: FunctionExpr, b: FunctionExpr, rel_tol: float = 1e-9,
               abs_tol: float = 1e-12) -> bool:
    """Structural equality with float tolerance on parameters.

    Sums compare term by term after sorting by node description, so the
    construction order of algebraically identical combinations is ignored.
    """
    if isinstance(a, Sum) or isinstance(b, Sum):
        ta = a.terms if isinstance(a, Sum) else ((1.0, a),)
        tb = b.terms if isinstance(b, Sum) else ((1.0, b),)
        if len(ta) != len(tb):
            return False
        key = lambda item: item[1].describe()
        for (ca, ea), (cb, eb) in zip(sorted(ta, key=key), sorted(tb, key=key)):
            if not math.isclose(ca, cb, rel_tol=rel_tol, abs_tol=abs_tol):
                return False
            if not expr_close(ea, eb, rel_tol, abs_tol):
                return False
        return True
    if type(a) is not type(b):
        return False
    da, db = a.to_dict(), b.to_dict()
    for k, va in da.items():
        vb = db[k]
        if isinstance(va, float):
            if not math.isclose(va, vb, rel_tol=rel_tol, abs_tol=abs_tol):
                return False
        elif va != vb:
            return False
    return True


def _fmt(x: float) -> str:
    return repr(int(x)) if float(x).is_integer() and abs(x) < 1e15 else repr(float(x))


def _coeff(a: float) -> str:
    if a == 1.0:
        return ""
    if a == -1.0:
        return "-"
    return f"{_fmt(a)}*"


__all__ = [
    "FunctionExpr",
    "Const",
    "Monomial",
    "Power",
    "ExpSmall",
    "ExpBig",
    "Cos",
    "Sin",
    "BigCos",
    "BigSin",
    "Cosh",
    "Sinh",
    "BigCosh",
    "BigSinh",
    "MonomialTimesExpSmall",
    "MonomialTimesExpBig",
    "Sum",
    "combine",
    "expr_from_dict",
    "expr_close",
]
