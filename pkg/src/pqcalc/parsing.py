"""Tiny text format for function expressions.

Accepts sums of the supported closed-form families, e.g. "t^3",
"e(0.5t)", "2*cos(0.3t) - 1", "t^2*E(-0.4t)", "1 + 5t". Coefficients may
be attached with or without "*"; arguments are linear in t.
"""

from __future__ import annotations

import re

from .errors import PQDomainError
from .expressions import (BigCos, BigCosh, BigSin, BigSinh, Const, Cos, Cosh,
                          ExpBig, ExpSmall, FunctionExpr, Monomial,
                          MonomialTimesExpBig, MonomialTimesExpSmall, Power,
                          Sin, Sinh, combine)

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"

_FUNCS = {
    "e": ExpSmall, "E": ExpBig,
    "cos": Cos, "sin": Sin, "Cos": BigCos, "Sin": BigSin,
    "cosh": Cosh, "sinh": Sinh, "Cosh": BigCosh, "Sinh": BigSinh,
}

_ARG_RE = re.compile(rf"^([-+])?\s*({_NUM})?\s*\*?\s*t$")
_COEFF_RE = re.compile(rf"^({_NUM})\s*\*?\s*")
_MONO_RE = re.compile(rf"^t(?:\^([-+]?{_NUM}))?$")
_LADDER_RE = re.compile(r"^t(?:\^(\d+))?\s*\*\s*(e|E)\((.*)\)$")
_CALL_RE = re.compile(r"^([A-Za-z]+)\((.*)\)$")


def _parse_linear_arg(text: str, where: str) -> float:
    """The scale a in an argument 'a t' / 'at' / '-t' / 't'."""
    m = _ARG_RE.match(text.strip())
    if not m:
        raise PQDomainError(
            f"cannot parse argument {text!r} in {where}; expected a multiple of t")
    sign = -1.0 if m.group(1) == "-" else 1.0
    return sign * float(m.group(2)) if m.group(2) else sign


def _parse_atom(body: str) -> tuple[float, FunctionExpr]:
    body = body.strip()
    coeff = 1.0
    m = _COEFF_RE.match(body)
    if m:
        coeff = float(m.group(1))
        body = body[m.end():].strip()
    if not body:
        return coeff, Const(1.0)

    m = _MONO_RE.match(body)
    if m:
        if m.group(1) is None:
            return coeff, Monomial(1)
        alpha = float(m.group(1))
        if alpha >= 0 and alpha == int(alpha):
            return coeff, Monomial(int(alpha))
        return coeff, Power(alpha)

    m = _LADDER_RE.match(body)
    if m:
        n = int(m.group(1)) if m.group(1) else 1
        a = _parse_linear_arg(m.group(3), body)
        cls = MonomialTimesExpSmall if m.group(2) == "e" else MonomialTimesExpBig
        return coeff, cls(n, a)

    m = _CALL_RE.match(body)
    if m and m.group(1) in _FUNCS:
        a = _parse_linear_arg(m.group(2), body)
        return coeff, _FUNCS[m.group(1)](a)

    raise PQDomainError(
        f"cannot parse term {body!r}; supported forms: a number, t, t^k, "
        "t^alpha, f(at) for f in {e, E, cos, sin, Cos, Sin, cosh, sinh, "
        "Cosh, Sinh}, and t^n*e(at) / t^n*E(at)")


def _split_terms(text: str) -> list[tuple[float, str]]:
    """Split on top-level +/-, respecting parentheses and number exponents."""
    terms: list[tuple[float, str]] = []
    depth = 0
    sign = 1.0
    cur: list[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise PQDomainError(f"unbalanced parentheses in {text!r}")
        if ch in "+-" and depth == 0:
            stripped = "".join(cur).rstrip()
            # a sign after an operator, or right after e/E of a float
            # literal, belongs to the term being built
            operator_context = bool(stripped) and (
                stripped[-1] in "^*/"
                or (stripped[-1] in "eE"
                    and len(stripped) >= 2
                    and stripped[-2].isdigit()))
            if stripped and not operator_context:
                terms.append((sign, stripped))
                sign = -1.0 if ch == "-" else 1.0
                cur = []
                continue
            if not stripped and not cur:
                sign *= -1.0 if ch == "-" else 1.0
                continue
        cur.append(ch)
    if depth != 0:
        raise PQDomainError(f"unbalanced parentheses in {text!r}")
    last = "".join(cur).strip()
    if not last:
        raise PQDomainError(f"empty term in {text!r}")
    terms.append((sign, last))
    return terms


def parse_expr(text: str) -> FunctionExpr:
    """Parse the textual expression format into a FunctionExpr."""
    if not isinstance(text, str) or not text.strip():
        raise PQDomainError("empty expression")
    parts = []
    for sign, body in _split_terms(text.strip()):
        coeff, node = _parse_atom(body)
        parts.append((sign * coeff, node))
    return combine(parts)


__all__ = ["parse_expr"]
