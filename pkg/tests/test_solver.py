"""Transform-algebra solver for first-order and oscillator problems."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqcalc.arith import PQBase
from pqcalc.errors import PQDomainError, UnsupportedProblemError
from pqcalc.expressions import (
    Const,
    Cos,
    ExpSmall,
    Monomial,
    MonomialTimesExpSmall,
    Sin,
    Sum,
    expr_close,
)
from pqcalc.laplace import RationalBasic, transform_expr_close
from pqcalc.solver import (
    PQCauchyProblem,
    first_order_transform,
    oscillator_problem,
    oscillator_transform,
    solve_first_order,
    solve_oscillator,
    verify_solution,
)

B = PQBase(1.2, 0.8)
POINTS = (0.1, 0.25, 0.5, 1.0)


def test_problem_validation():
    with pytest.raises(PQDomainError):
        PQCauchyProblem(3, 3, 0.5, Const(0.0), 1.0)
    with pytest.raises(UnsupportedProblemError):
        PQCauchyProblem(1, 2, 0.5, Const(0.0), 1.0)
    with pytest.raises(PQDomainError):
        PQCauchyProblem(2, 2, 0.5, Const(0.0), 1.0)  # needs initial_derivative
    with pytest.raises(PQDomainError):
        PQCauchyProblem(1, 1, 0.5, "not an expression", 1.0)


def test_first_order_homogeneous():
    # D f(t) + c f(pt) = 0, f(0) = 1  ->  f = e(-c t)
    c = 0.7
    problem = PQCauchyProblem(1, 1, c, Const(0.0), 1.0)
    F = first_order_transform(problem, B)
    assert transform_expr_close(F, RationalBasic(1.0, (-c / B.p,)))
    f = solve_first_order(problem, B)
    assert expr_close(f, ExpSmall(-c), rel_tol=1e-12)
    report = verify_solution(problem, f, B, POINTS)
    assert report.passed
    assert report.max_abs_residual < 1e-12
    assert report.initial_value_error < 1e-12


def test_first_order_zero_coefficient():
    problem = PQCauchyProblem(1, 1, 0.0, Const(0.0), 1.0)
    f = solve_first_order(problem, B)
    assert f == Const(1.0)


def test_first_order_zero_data():
    problem = PQCauchyProblem(1, 1, 0.4, Const(0.0), 0.0)
    f = solve_first_order(problem, B)
    assert f == Const(0.0)


def test_resonant_intermediate_structure():
    # D f - lam f(pt) = lam e(lam q t), f(0) = 0:
    # the transform must equal (1/p) / ((s - lam/p)(s - lam q/p^2))
    lam = 0.6
    problem = PQCauchyProblem(1, 1, -lam, ExpSmall(lam * B.q), 0.0)
    F = first_order_transform(problem, B)
    want = RationalBasic(1.0 / B.p, (lam / B.p, lam * B.q / B.p**2))
    assert transform_expr_close(F, want, rel_tol=1e-12)


def test_resonant_solution_and_residual():
    lam = 0.6
    problem = PQCauchyProblem(1, 1, -lam, ExpSmall(lam * B.q), 0.0)
    f = solve_first_order(problem, B)
    assert expr_close(f, MonomialTimesExpSmall(1, lam), rel_tol=1e-12)
    report = verify_solution(problem, f, B, POINTS)
    assert report.passed
    assert report.max_abs_residual < 1e-8


def test_forcing_must_match_resonance():
    # only the resonant frequency a = -c q is invertible by the table route
    with pytest.raises(UnsupportedProblemError):
        first_order_transform(PQCauchyProblem(1, 1, -0.6, ExpSmall(0.9), 0.0), B)
    with pytest.raises(UnsupportedProblemError):
        first_order_transform(PQCauchyProblem(1, 1, -0.6, Monomial(1), 0.0), B)


def test_oscillator_transform_structure():
    omega, A, Bv = 1.3, 0.4, 1.0
    F = oscillator_transform(omega, A, Bv, B)
    s = 2.0
    # (p^2 B s + p A) / ((p s)^2 + p omega^2 / p) evaluated the quadratic way
    beta = B.p
    af = omega / math.sqrt(B.p)
    want = (B.p**2 * Bv * s + B.p * A) / ((beta * s) ** 2 + af * af)
    assert F.evaluate(s) == pytest.approx(want, rel=1e-14)
    with pytest.raises(PQDomainError):
        oscillator_transform(-1.0, A, Bv, B)


def test_oscillator_solution_structure_and_residual():
    # D^2 f(t) + omega^2 f(p^2 t) = 0, f(0) = B, Df(0) = A
    omega, A, Bv = 1.3, 0.4, 1.0
    f = solve_oscillator(omega, A, Bv, B)
    freq = omega / math.sqrt(B.p)
    want_terms = [(Bv, Cos(freq)), (A * math.sqrt(B.p) / omega, Sin(freq))]
    assert isinstance(f, Sum)
    got = {type(node).__name__: coeff for coeff, node in f.terms}
    assert got["Cos"] == pytest.approx(Bv, rel=1e-14)
    assert got["Sin"] == pytest.approx(want_terms[1][0], rel=1e-14)
    for coeff, node in f.terms:
        assert node.a == pytest.approx(freq, rel=1e-14)

    problem = oscillator_problem(omega, A, Bv)
    report = verify_solution(problem, f, B, POINTS)
    assert report.passed
    assert report.max_abs_residual < 1e-8
    assert report.initial_value_error < 1e-10
    assert report.initial_derivative_error < 1e-10


def test_oscillator_zero_data():
    f = solve_oscillator(1.3, 0.0, 0.0, B)
    assert f == Const(0.0)


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=-0.9, max_value=0.9).filter(lambda c: abs(c) > 0.05))
def test_first_order_residual_property(c):
    problem = PQCauchyProblem(1, 1, c, Const(0.0), 1.0)
    f = solve_first_order(problem, B)
    report = verify_solution(problem, f, B, POINTS)
    assert report.passed
    assert report.max_abs_residual < 1e-8


def test_verify_rejects_wrong_candidate():
    problem = PQCauchyProblem(1, 1, 0.7, Const(0.0), 1.0)
    report = verify_solution(problem, ExpSmall(-0.6), B, POINTS)
    assert not report.passed
    assert report.max_abs_residual > 1e-3


def test_verify_residual_report_shape():
    problem = PQCauchyProblem(1, 1, 0.7, Const(0.0), 1.0)
    f = solve_first_order(problem, B)
    report = verify_solution(problem, f, B, POINTS, tol=1e-8)
    assert report.sample_points == tuple(POINTS)
    assert len(report.per_point) == len(POINTS)
    assert report.tolerance == 1e-8
    # per-point residuals keep their sign; the headline number is the abs max
    assert report.max_abs_residual == max(abs(r) for r in report.per_point)


def test_verify_requires_positive_points():
    problem = PQCauchyProblem(1, 1, 0.7, Const(0.0), 1.0)
    f = solve_first_order(problem, B)
    with pytest.raises(PQDomainError):
        verify_solution(problem, f, B, (0.5, -1.0))


def test_verify_reports_stencil_domain_violation():
    # high-frequency oscillator far outside the trig convergence radius
    omega = 1.3
    problem = oscillator_problem(omega, 0.4, 1.0)
    f = solve_oscillator(omega, 0.4, 1.0, B)
    with pytest.raises(PQDomainError, match="stencil"):
        verify_solution(problem, f, B, (40.0,))
