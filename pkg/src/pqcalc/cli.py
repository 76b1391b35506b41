"""Command-line surface.

Every math subcommand shares the --p/--q/--max-terms/--tol/--jmin/--jmax
globals, runs in process by default, and emits a deterministic
OutputRecord (JSON with sorted keys and 17-significant-digit floats, or
text/CSV). --server posts the same inputs to a running service instead.

Exit codes: 0 success, 1 domain or validation error, 2 numerical
non-convergence (or a failed identity suite).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any

from .errors import PQConvergenceError, PQDomainError
from .service.handlers import dispatch
from .service.schemas import EVAL_FUNCTIONS
from .suites import suite_names


# --- rendering ----------------------------------------------------------

def _float_repr(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def render_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _float_repr(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {render_json(v)}"
                          for k, v in sorted(obj.items()))
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    raise PQDomainError(f"cannot serialize a {type(obj).__name__}")


def _text_value(value: Any, indent: str = "  ") -> list[str]:
    if isinstance(value, dict):
        lines = []
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}{k}:")
                lines.extend(_text_value(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v!r}" if isinstance(v, float)
                             else f"{indent}{k}: {v}")
        return lines
    if isinstance(value, list):
        return [f"{indent}- {render_json(v)}" for v in value]
    return [f"{indent}{value!r}"]


def render_text(record: dict[str, Any]) -> str:
    command = record["command"]
    value = record["value"]
    diag = record.get("diagnostics", {})
    lines = [f"command: {command}"]
    inputs = record.get("inputs", {})
    shown = " ".join(f"{k}={inputs[k]}" for k in sorted(inputs)
                     if inputs[k] is not None)
    lines.append(f"inputs: {shown}")

    if command == "table":
        rows = value["rows"]
        w1 = max(len(r["family"]) for r in rows)
        w2 = max(len(r["image"]) for r in rows)
        lines.append(f"{value['kind']}-kind transform table:")
        for r in rows:
            lines.append(f"  {r['family']:<{w1}}  ->  {r['image']:<{w2}}"
                         f"   [{r['validity']}]")
    elif command == "sweep":
        lines.append("s,value,terms_used,tail_estimate")
        for r in value["rows"]:
            lines.append(f"{_float_repr(r['s'])},{_float_repr(r['value'])},"
                         f"{r['terms_used']},{_float_repr(r['tail_estimate'])}")
    elif command == "identity-check":
        flag = "PASS" if value["passed"] else "FAIL"
        lines.append(f"{flag} {value['suite']}: checks={value['checks']} "
                     f"max_error={value['max_error']:.3e} "
                     f"tolerance={value['tolerance']:.0e}")
        lines.append(f"  worst: {value['worst']}")
    elif command == "solve":
        lines.append(f"solution: {value['closed_form']}")
        lines.append(f"transform intermediate: {value['intermediate']['closed_form']}")
        rep = value["residual_report"]
        lines.append(f"max residual: {rep['max_abs_residual']:.3e} on "
                     f"{rep['sample_points']} (passed: {rep['passed']})")
    elif command == "transform" and isinstance(value, dict):
        lines.append(f"numeric:      {value['numeric']!r}")
        lines.append(f"table:        {value['table']!r}")
        lines.append(f"relative gap: {value['relative_gap']:.3e}")
        if "closed_form" in diag:
            lines.append(f"closed form:  {diag['closed_form']}")
    elif isinstance(value, dict):
        lines.append("value:")
        lines.extend(_text_value(value))
    else:
        lines.append(f"value: {value!r}" if isinstance(value, float)
                     else f"value: {value}")

    if command not in ("table", "sweep"):
        pieces = [f"{k}={diag[k]!r}" if isinstance(diag[k], float)
                  else f"{k}={diag[k]}" for k in sorted(diag)]
        lines.append(f"diagnostics: {' '.join(pieces)}")
    return "\n".join(lines)


def render_csv(record: dict[str, Any]) -> str:
    if record["command"] != "sweep":
        raise PQDomainError("--csv output is only available for sweep")
    out = ["s,value,terms_used,tail_estimate"]
    for r in record["value"]["rows"]:
        out.append(f"{_float_repr(r['s'])},{_float_repr(r['value'])},"
                   f"{r['terms_used']},{_float_repr(r['tail_estimate'])}")
    return "\n".join(out)


def _render(record: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return render_json(record)
    if fmt == "csv":
        return render_csv(record)
    return render_text(record)


# --- argument parsing ----------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage problems are domain errors: exit 1, message on stderr
    def error(self, message):
        raise PQDomainError(message)


def _common_parser() -> _Parser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--p", type=float, required=True,
                   help="larger deformation parameter (grid commands need p >= 1)")
    g.add_argument("--q", type=float, required=True,
                   help="smaller deformation parameter (0 < q < p)")
    g.add_argument("--max-terms", dest="max_terms", type=int, default=500,
                   help="series truncation cap (default 500)")
    g.add_argument("--tol", type=float, default=None,
                   help="series/grid stopping tolerance (default: machine level)")
    g.add_argument("--jmin", type=int, default=-400,
                   help="lower bilateral grid index (default -400)")
    g.add_argument("--jmax", type=int, default=400,
                   help="upper bilateral grid index (default 400)")
    g.add_argument("--server", default=None, metavar="URL",
                   help="send the command to a running service instead of "
                        "computing in process")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="JSON OutputRecord (default)")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv",
                     help="CSV rows (sweep only)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text",
                     help="human-readable text")
    common.set_defaults(fmt="json")
    return common


def build_parser() -> _Parser:
    parser = _Parser(prog="pqcalc",
                     description="Two-parameter deformed calculus toolkit")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")
    common = [_common_parser()]

    p = sub.add_parser("eval", parents=common,
                       help="evaluate a special function at a point")
    p.add_argument("fn", choices=EVAL_FUNCTIONS,
                   help="which function (e/E exponentials, small/capital trig)")
    p.add_argument("--z", type=float, required=True, help="argument")

    p = sub.add_parser("derivative", parents=common,
                       help="n-th deformed derivative of an expression")
    p.add_argument("--fn", required=True, help='expression, e.g. "t^3" or "e(0.5t)"')
    p.add_argument("--n", type=int, default=1, help="derivative order (default 1)")
    p.add_argument("--x", type=float, required=True, help="evaluation point")

    p = sub.add_parser("integrate", parents=common,
                       help="grid integral of an expression")
    p.add_argument("--fn", required=True, help="expression to integrate")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--upper", type=float, help="integrate over [0, upper]")
    g.add_argument("--improper", action="store_true",
                   help="integrate over [0, infinity)")

    p = sub.add_parser("transform", parents=common,
                       help="deformed Laplace transform of an expression")
    p.add_argument("--fn", required=True, help="expression to transform")
    p.add_argument("--s", type=float, required=True, help="transform variable")
    p.add_argument("--kind", choices=("first", "second"), default="first")
    p.add_argument("--mode", choices=("numeric", "table", "both"),
                   default="both",
                   help="quadrature, closed form, or both with the relative gap")

    p = sub.add_parser("gamma", parents=common,
                       help="deformed gamma function of either kind")
    p.add_argument("--kind", choices=("first", "second"), required=True)
    p.add_argument("--z", type=float, required=True)

    p = sub.add_parser("identity-check", parents=common,
                       help="run one named identity suite")
    p.add_argument("--suite", choices=tuple(suite_names()), required=True)

    p = sub.add_parser("solve", parents=common,
                       help="solve a supported difference equation")
    p.add_argument("--problem",
                   choices=("first-order", "resonant", "oscillator"),
                   required=True)
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE",
                   help="first-order: c [f0]; resonant: lam [f0]; "
                        "oscillator: omega [A B]")

    p = sub.add_parser("table", parents=common,
                       help="print the closed-form transform table")
    p.add_argument("--kind", choices=("first", "second"), required=True)

    p = sub.add_parser("sweep", parents=common,
                       help="transform values over a range of s (CSV-friendly)")
    p.add_argument("--fn", required=True)
    p.add_argument("--s-from", dest="s_from", type=float, required=True)
    p.add_argument("--s-to", dest="s_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--kind", choices=("first", "second"), default="first")
    p.add_argument("--mode", choices=("numeric", "table"), default="numeric")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _parse_params(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        key, sep, val = pair.partition("=")
        if not sep or not key:
            raise PQDomainError(f"--params entries must be KEY=VALUE, got {pair!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise PQDomainError(
                f"--params value for {key!r} must be a number, got {val!r}") from None
    return out


def _collect_inputs(ns: argparse.Namespace) -> dict[str, Any]:
    inputs: dict[str, Any] = {
        "p": ns.p, "q": ns.q, "max_terms": ns.max_terms, "tol": ns.tol,
        "jmin": ns.jmin, "jmax": ns.jmax,
    }
    cmd = ns.command
    if cmd == "eval":
        inputs.update(fn=ns.fn, z=ns.z)
    elif cmd == "derivative":
        inputs.update(fn=ns.fn, n=ns.n, x=ns.x)
    elif cmd == "integrate":
        inputs.update(fn=ns.fn, improper=ns.improper)
        if ns.upper is not None:
            inputs["upper"] = ns.upper
    elif cmd == "transform":
        inputs.update(fn=ns.fn, s=ns.s, kind=ns.kind, mode=ns.mode)
    elif cmd == "gamma":
        inputs.update(kind=ns.kind, z=ns.z)
    elif cmd == "identity-check":
        inputs.update(suite=ns.suite)
    elif cmd == "solve":
        inputs.update(problem=ns.problem, params=_parse_params(ns.params))
    elif cmd == "table":
        inputs.update(kind=ns.kind)
    elif cmd == "sweep":
        inputs.update(fn=ns.fn, s_from=ns.s_from, s_to=ns.s_to,
                      steps=ns.steps, kind=ns.kind, mode=ns.mode)
    return inputs


# --- remote mode ----------------------------------------------------------

def _remote_dispatch(server: str, command: str,
                     inputs: dict[str, Any]) -> dict[str, Any]:
    import httpx

    url = server.rstrip("/") + "/" + command
    try:
        resp = httpx.post(url, json=inputs, timeout=120.0)
    except httpx.HTTPError as exc:
        raise PQDomainError(f"cannot reach server {server}: {exc}") from exc
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {"error": resp.text[:300]}
    message = body.get("error", f"server returned {resp.status_code}")
    if resp.status_code == 422:
        raise PQConvergenceError(message)
    raise PQDomainError(message)


# --- entry point -----------------------------------------------------------

def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except PQDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0

    if ns.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=ns.host, port=ns.port)
        return 0

    try:
        inputs = _collect_inputs(ns)
        if ns.server:
            record = _remote_dispatch(ns.server, ns.command, inputs)
        else:
            record = dispatch(ns.command, inputs)
        print(_render(record, ns.fmt))
        if ns.command == "identity-check" and not record["value"]["passed"]:
            return 2
        return 0
    except PQConvergenceError as exc:
        detail = {"error": str(exc), "type": type(exc).__name__,
                  "partial": getattr(exc, "partial", None),
                  "last_term": getattr(exc, "last_term", None)}
        side = getattr(exc, "side", None)
        if side is not None:
            detail["side"] = side
        print(render_json(detail), file=sys.stderr)
        return 2
    except PQDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(run_command())


__all__ = ["run_command", "main", "build_parser", "render_json",
           "render_text", "render_csv"]
