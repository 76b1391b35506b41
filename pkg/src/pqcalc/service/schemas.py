"""Request/response models shared by the HTTP service and the CLI.

Every request carries the full numeric configuration (p, q, truncation,
grid window), so a recorded `inputs` map replays to the identical value.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class CommonParams(BaseModel):
    """Deformation pair plus truncation and grid-window settings."""

    model_config = ConfigDict(extra="forbid")

    p: float
    q: float
    max_terms: int = Field(default=500, ge=1)
    tol: Optional[float] = Field(default=None, gt=0.0)
    jmin: int = Field(default=-400, lt=0)
    jmax: int = Field(default=400, gt=0)


EVAL_FUNCTIONS = ("e", "E", "cos", "sin", "Cos", "Sin",
                  "cosh", "sinh", "Cosh", "Sinh")


class EvalRequest(CommonParams):
    fn: Literal["e", "E", "cos", "sin", "Cos", "Sin",
                "cosh", "sinh", "Cosh", "Sinh"]
    z: float


class DerivativeRequest(CommonParams):
    fn: str
    n: int = Field(default=1, ge=0)
    x: float


class IntegrateRequest(CommonParams):
    fn: str
    upper: Optional[float] = None
    improper: bool = False


class TransformRequest(CommonParams):
    fn: str
    s: float
    kind: Literal["first", "second"] = "first"
    mode: Literal["numeric", "table", "both"] = "both"


class GammaRequest(CommonParams):
    kind: Literal["first", "second"]
    z: float


class IdentityRequest(CommonParams):
    suite: str


class SolveRequest(CommonParams):
    problem: Literal["first-order", "resonant", "oscillator"]
    params: dict[str, float] = Field(default_factory=dict)


class TableRequest(CommonParams):
    kind: Literal["first", "second"]


class SweepRequest(CommonParams):
    fn: str
    s_from: float
    s_to: float
    steps: int = Field(ge=1)
    kind: Literal["first", "second"] = "first"
    mode: Literal["numeric", "table"] = "numeric"


class OutputRecord(BaseModel):
    """Uniform result envelope: what ran, with what, what came out."""

    model_config = ConfigDict(extra="forbid")

    command: str
    inputs: dict[str, Any]
    value: Any
    diagnostics: dict[str, Any]


REQUEST_MODELS: dict[str, type[CommonParams]] = {
    "eval": EvalRequest,
    "derivative": DerivativeRequest,
    "integrate": IntegrateRequest,
    "transform": TransformRequest,
    "gamma": GammaRequest,
    "identity-check": IdentityRequest,
    "solve": SolveRequest,
    "table": TableRequest,
    "sweep": SweepRequest,
}

__all__ = [
    "CommonParams", "EVAL_FUNCTIONS", "EvalRequest", "DerivativeRequest",
    "IntegrateRequest", "TransformRequest", "GammaRequest", "IdentityRequest",
    "SolveRequest", "TableRequest", "SweepRequest", "OutputRecord",
    "REQUEST_MODELS",
]
