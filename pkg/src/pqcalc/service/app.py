"""HTTP surface: one POST endpoint per command, uniform error mapping.

400 = domain/validation problems (bad parameters, unsupported families),
422 = numerical non-convergence with partial-sum diagnostics.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..errors import PQConvergenceError, PQDomainError
from .handlers import (handle_derivative, handle_eval, handle_gamma,
                       handle_identity, handle_integrate, handle_solve,
                       handle_sweep, handle_table, handle_transform)
from .schemas import (DerivativeRequest, EvalRequest, GammaRequest,
                      IdentityRequest, IntegrateRequest, OutputRecord,
                      SolveRequest, SweepRequest, TableRequest,
                      TransformRequest)


def create_app() -> FastAPI:
    from .. import __version__

    app = FastAPI(title="pqcalc", version=__version__,
                  description="Two-parameter deformed calculus: special "
                              "functions, grid integrals, both transform "
                              "kinds, and the difference-equation solver.")

    @app.exception_handler(PQDomainError)
    async def _domain_error(request: Request, exc: PQDomainError):
        return JSONResponse(status_code=400,
                            content={"error": str(exc),
                                     "type": type(exc).__name__})

    @app.exception_handler(PQConvergenceError)
    async def _convergence_error(request: Request, exc: PQConvergenceError):
        diagnostics = {"partial": getattr(exc, "partial", None),
                       "last_term": getattr(exc, "last_term", None)}
        side = getattr(exc, "side", None)
        if side is not None:
            diagnostics["side"] = side
        return JSONResponse(status_code=422,
                            content={"error": str(exc),
                                     "type": type(exc).__name__,
                                     "diagnostics": diagnostics})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(x) for x in first.get("loc", ()))
        return JSONResponse(status_code=400,
                            content={"error": f"{loc}: {first.get('msg', 'invalid request')}",
                                     "type": "ValidationError"})

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/eval", response_model=OutputRecord)
    async def eval_endpoint(req: EvalRequest):
        return handle_eval(req)

    @app.post("/derivative", response_model=OutputRecord)
    async def derivative_endpoint(req: DerivativeRequest):
        return handle_derivative(req)

    @app.post("/integrate", response_model=OutputRecord)
    async def integrate_endpoint(req: IntegrateRequest):
        return handle_integrate(req)

    @app.post("/transform", response_model=OutputRecord)
    async def transform_endpoint(req: TransformRequest):
        return handle_transform(req)

    @app.post("/gamma", response_model=OutputRecord)
    async def gamma_endpoint(req: GammaRequest):
        return handle_gamma(req)

    @app.post("/identity-check", response_model=OutputRecord)
    async def identity_endpoint(req: IdentityRequest):
        return handle_identity(req)

    @app.post("/solve", response_model=OutputRecord)
    async def solve_endpoint(req: SolveRequest):
        return handle_solve(req)

    @app.post("/table", response_model=OutputRecord)
    async def table_endpoint(req: TableRequest):
        return handle_table(req)

    @app.post("/sweep", response_model=OutputRecord)
    async def sweep_endpoint(req: SweepRequest):
        return handle_sweep(req)

    return app


__all__ = ["create_app"]
