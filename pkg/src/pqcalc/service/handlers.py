"""Command implementations behind both the HTTP endpoints and the CLI.

Each handler takes a validated request model and returns a plain
OutputRecord dict; `dispatch` revalidates a raw inputs map first, so a
recorded record can be replayed byte-identically.
"""

from __future__ import annotations

import math
from typing import Any

from pydantic import ValidationError

from ..arith import PQBase, SeriesTruncation
from ..calculus import (GridConfig, improper_info, pq_derivative_iterated,
                        pq_integral_finite_info)
from ..errors import PQDomainError
from ..expressions import Const, ExpSmall
from ..functions import (TrigKind, exp_big_info, exp_small_info, gamma_first,
                         gamma_second, trig_eval_info)
from ..laplace import (TransformKind, table_rows, transform_numeric_expr,
                       transform_table)
from ..parsing import parse_expr
from ..solver import (PQCauchyProblem, first_order_transform,
                      oscillator_problem, oscillator_transform,
                      solve_first_order, solve_oscillator, verify_solution)
from ..suites import run_suite
from .schemas import (REQUEST_MODELS, CommonParams, DerivativeRequest,
                      EvalRequest, GammaRequest, IdentityRequest,
                      IntegrateRequest, SolveRequest, SweepRequest,
                      TableRequest, TransformRequest)

_TRIG_EVAL = {"cos": "cos", "sin": "sin", "Cos": "Cos", "Sin": "Sin",
              "cosh": "cosh", "sinh": "sinh", "Cosh": "Cosh", "Sinh": "Sinh"}

_SOLVE_POINTS = (0.1, 0.25, 0.5, 1.0)


def _base(req: CommonParams) -> PQBase:
    return PQBase(req.p, req.q)


def _trunc(req: CommonParams) -> SeriesTruncation:
    tol = req.tol
    return SeriesTruncation(max_terms=req.max_terms,
                            abs_tol=tol if tol is not None else 1e-15,
                            rel_tol=tol if tol is not None else 1e-15)


def _grid(req: CommonParams) -> GridConfig:
    return GridConfig(j_min=req.jmin, j_max=req.jmax,
                      abs_tol=req.tol if req.tol is not None else 1e-14)


def _record(command: str, req: CommonParams, value: Any,
            diagnostics: dict[str, Any]) -> dict[str, Any]:
    return {"command": command, "inputs": req.model_dump(mode="json"),
            "value": value, "diagnostics": diagnostics}


def _grid_diag(info, path: str = "grid") -> dict[str, Any]:
    return {"terms_used": info.terms_used, "tail_estimate": info.tail_estimate,
            "path": path}


def handle_eval(req: EvalRequest) -> dict[str, Any]:
    base, trunc = _base(req), _trunc(req)
    if req.fn == "e":
        info = exp_small_info(base, req.z, trunc)
    elif req.fn == "E":
        info = exp_big_info(base, req.z, trunc)
    else:
        info = trig_eval_info(TrigKind(_TRIG_EVAL[req.fn]), base, req.z, trunc)
    return _record("eval", req, info.value, _grid_diag(info, info.path))


def handle_derivative(req: DerivativeRequest) -> dict[str, Any]:
    base, trunc = _base(req), _trunc(req)
    expr = parse_expr(req.fn)

    def f(t: float) -> float:
        return expr.evaluate(base, t, trunc)

    value = pq_derivative_iterated(f, base, req.n, req.x)
    return _record("derivative", req, value,
                   {"terms_used": req.n + 1, "tail_estimate": 0.0,
                    "path": "stencil"})


def handle_integrate(req: IntegrateRequest) -> dict[str, Any]:
    base, trunc, grid = _base(req), _trunc(req), _grid(req)
    if req.improper == (req.upper is not None):
        raise PQDomainError("integrate needs exactly one of --upper or --improper")
    expr = parse_expr(req.fn)

    def f(t: float) -> float:
        return expr.evaluate(base, t, trunc)

    if req.improper:
        info = improper_info(f, base, grid)
    else:
        info = pq_integral_finite_info(f, base, req.upper, grid)
    return _record("integrate", req, info.value, _grid_diag(info))


def handle_transform(req: TransformRequest) -> dict[str, Any]:
    base, trunc, grid = _base(req), _trunc(req), _grid(req)
    expr = parse_expr(req.fn)
    kind = TransformKind(req.kind)
    texpr = tv = ninfo = None
    if req.mode in ("table", "both"):
        texpr = transform_table(expr, base, kind, grid, trunc)
        tv = texpr.evaluate(req.s, trunc)
    if req.mode in ("numeric", "both"):
        ninfo = transform_numeric_expr(expr, base, req.s, kind, grid, trunc)

    if req.mode == "numeric":
        return _record("transform", req, ninfo.value, _grid_diag(ninfo))
    if req.mode == "table":
        diag = {"terms_used": 0, "tail_estimate": 0.0, "path": "table",
                "closed_form": texpr.describe(), "s_min": texpr.s_min}
        return _record("transform", req, tv, diag)
    gap = abs(ninfo.value - tv) / abs(tv) if tv != 0.0 else abs(ninfo.value - tv)
    value = {"numeric": ninfo.value, "table": tv, "relative_gap": gap}
    diag = _grid_diag(ninfo)
    diag["closed_form"] = texpr.describe()
    diag["s_min"] = texpr.s_min
    return _record("transform", req, value, diag)


def handle_gamma(req: GammaRequest) -> dict[str, Any]:
    base, trunc, grid = _base(req), _trunc(req), _grid(req)
    fn = gamma_first if req.kind == "first" else gamma_second
    value = fn(base, req.z, grid, trunc)
    integral_route = not (req.z >= 1.0 and float(req.z).is_integer())
    return _record("gamma", req, value,
                   {"terms_used": 0, "tail_estimate": 0.0,
                    "path": "grid" if integral_route else "product"})


def handle_identity(req: IdentityRequest) -> dict[str, Any]:
    base, trunc, grid = _base(req), _trunc(req), _grid(req)
    r = run_suite(req.suite, base, grid, trunc)
    value = {"suite": r.suite, "checks": r.checks, "max_error": r.max_error,
             "tolerance": r.tolerance, "passed": r.passed, "worst": r.worst}
    return _record("identity-check", req, value,
                   {"terms_used": r.checks, "tail_estimate": r.max_error,
                    "path": "suite"})


_SOLVE_KEYS = {
    "first-order": ({"c"}, {"c", "f0"}),
    "resonant": ({"lam"}, {"lam", "f0"}),
    "oscillator": ({"omega"}, {"omega", "A", "B"}),
}


def handle_solve(req: SolveRequest) -> dict[str, Any]:
    base, trunc = _base(req), _trunc(req)
    params = req.params
    required, allowed = _SOLVE_KEYS[req.problem]
    missing = required - set(params)
    unknown = set(params) - allowed
    if missing or unknown:
        raise PQDomainError(
            f"problem {req.problem!r} takes params {sorted(allowed)} "
            f"(required: {sorted(required)}); "
            + (f"missing {sorted(missing)}; " if missing else "")
            + (f"unknown {sorted(unknown)}" if unknown else ""))

    if req.problem == "first-order":
        problem = PQCauchyProblem(1, 1, params["c"], Const(0.0),
                                  params.get("f0", 1.0))
        intermediate = first_order_transform(problem, base)
        solution = solve_first_order(problem, base)
    elif req.problem == "resonant":
        lam = params["lam"]
        problem = PQCauchyProblem(1, 1, -lam, ExpSmall(lam * base.q),
                                  params.get("f0", 0.0))
        intermediate = first_order_transform(problem, base)
        solution = solve_first_order(problem, base)
    else:
        omega = params["omega"]
        A = params.get("A", 0.0)
        B = params.get("B", 1.0)
        problem = oscillator_problem(omega, A, B)
        intermediate = oscillator_transform(omega, A, B, base)
        solution = solve_oscillator(omega, A, B, base)

    report = verify_solution(problem, solution, base, _SOLVE_POINTS,
                             trunc=trunc)
    value = {
        "closed_form": solution.describe(),
        "solution": solution.to_dict(),
        "intermediate": {"closed_form": intermediate.describe(),
                         "expr": intermediate.to_dict()},
        "residual_report": {
            "max_abs_residual": report.max_abs_residual,
            "sample_points": list(report.sample_points),
            "per_point": list(report.per_point),
            "initial_value_error": report.initial_value_error,
            "initial_derivative_error": report.initial_derivative_error,
            "tolerance": report.tolerance,
            "passed": report.passed,
        },
    }
    return _record("solve", req, value,
                   {"terms_used": len(report.sample_points),
                    "tail_estimate": report.max_abs_residual, "path": "table"})


def handle_table(req: TableRequest) -> dict[str, Any]:
    rows = table_rows(TransformKind(req.kind))
    return _record("table", req, {"kind": req.kind, "rows": rows},
                   {"terms_used": len(rows), "tail_estimate": 0.0,
                    "path": "table"})


def handle_sweep(req: SweepRequest) -> dict[str, Any]:
    base, trunc, grid = _base(req), _trunc(req), _grid(req)
    if req.s_to < req.s_from:
        raise PQDomainError(f"sweep needs s_from <= s_to, got "
                            f"[{req.s_from}, {req.s_to}]")
    expr = parse_expr(req.fn)
    kind = TransformKind(req.kind)
    if req.steps == 1:
        points = [req.s_from]
    else:
        step = (req.s_to - req.s_from) / (req.steps - 1)
        points = [req.s_from + i * step for i in range(req.steps)]
    texpr = None
    if req.mode == "table":
        texpr = transform_table(expr, base, kind, grid, trunc)
    rows = []
    total_terms = 0
    worst_tail = 0.0
    for s in points:
        if req.mode == "numeric":
            info = transform_numeric_expr(expr, base, s, kind, grid, trunc)
            rows.append({"s": s, "value": info.value,
                         "terms_used": info.terms_used,
                         "tail_estimate": info.tail_estimate})
            total_terms += info.terms_used
            worst_tail = max(worst_tail, info.tail_estimate)
        else:
            rows.append({"s": s, "value": texpr.evaluate(s, trunc),
                         "terms_used": 0, "tail_estimate": 0.0})
    return _record("sweep", req, {"rows": rows},
                   {"terms_used": total_terms, "tail_estimate": worst_tail,
                    "path": "grid" if req.mode == "numeric" else "table"})


HANDLERS = {
    "eval": handle_eval,
    "derivative": handle_derivative,
    "integrate": handle_integrate,
    "transform": handle_transform,
    "gamma": handle_gamma,
    "identity-check": handle_identity,
    "solve": handle_solve,
    "table": handle_table,
    "sweep": handle_sweep,
}


def dispatch(command: str, inputs: dict[str, Any]) -> dict[str, Any]:
    """Validate a raw inputs map against the command's request model and
    run its handler; the replay entry point for recorded outputs."""
    try:
        model = REQUEST_MODELS[command]
    except KeyError:
        raise PQDomainError(
            f"unknown command {command!r}; choose from "
            f"{', '.join(REQUEST_MODELS)}") from None
    try:
        req = model(**inputs)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(x) for x in first.get("loc", ()))
        raise PQDomainError(
            f"invalid inputs for {command}: {loc}: {first.get('msg')}") from None
    return HANDLERS[command](req)


__all__ = ["HANDLERS", "dispatch"] + [f"handle_{n}" for n in (
    "eval", "derivative", "integrate", "transform", "gamma", "identity",
    "solve", "table", "sweep")]
