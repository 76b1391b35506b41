"""End-to-end acceptance gates.

One test per criterion; each prints a single CRITERION N PASS line with the
measured worst-case numbers after its assertions hold. Tolerances here are
the contract values, not the (usually tighter) ones the unit tests use.
"""

import json
import math
import random
from fractions import Fraction

import pytest

from pqcalc.arith import (DEFAULT_TRUNCATION, PQBase, binom2, pq_factorial,
                          pq_number, pq_number_real)
from pqcalc.calculus import (DEFAULT_GRID, deriv_reciprocal_closed,
                             pq_derivative_iterated)
from pqcalc.cli import run_command
from pqcalc.errors import UnsupportedTransformError
from pqcalc.expressions import (BigCos, BigCosh, BigSin, BigSinh, Const, Cos,
                                Cosh, ExpBig, ExpSmall, Monomial,
                                MonomialTimesExpBig, MonomialTimesExpSmall,
                                Power, Sin, Sinh, Sum)
from pqcalc.functions import (exp_big, exp_small, first_kernel_integral,
                              gamma_first, gamma_first_integral, gamma_second)
from pqcalc.laplace import (RationalBasic, TransformKind, derivative_of_transform,
                            numeric_s_min, scaling_apply, transform_numeric_expr,
                            transform_of_derivative, transform_table)
from pqcalc.service.handlers import dispatch
from pqcalc.solver import (PQCauchyProblem, first_order_transform,
                           oscillator_problem, solve_first_order,
                           solve_oscillator, verify_solution)
from pqcalc.suites import run_suite

BASE = PQBase(1.2, 0.8)
SAMPLE_POINTS = (0.1, 0.25, 0.5, 1.0)


def _table_corpus():
    exprs = [Const(1.0)]
    exprs += [Monomial(n) for n in range(1, 7)]
    exprs += [Power(0.5), Power(1.5)]
    for a in (0.3, 0.5):
        exprs += [
            ExpSmall(a), ExpBig(a),
            Cos(a), Sin(a), BigCos(a), BigSin(a),
            Cosh(a), Sinh(a), BigCosh(a), BigSinh(a),
        ]
        for n in range(1, 5):
            exprs += [MonomialTimesExpSmall(n, a), MonomialTimesExpBig(n, a)]
    return exprs


def test_criterion_1_transform_table_oracle():
    pairs = 0
    worst = 0.0
    worst_power = 0.0
    for p in (1.1, 1.2, 1.5):
        base = PQBase(p, 0.6 * p)
        for expr in _table_corpus():
            for kind in (TransformKind.FIRST, TransformKind.SECOND):
                try:
                    texpr = transform_table(expr, base, kind)
                    thr = max(texpr.s_min, numeric_s_min(expr, base, kind))
                except UnsupportedTransformError:
                    continue
                if not math.isfinite(thr):
                    continue
                s = 1.75 * thr if thr > 0 else 1.75
                tv = texpr.evaluate(s, DEFAULT_TRUNCATION)
                nv = transform_numeric_expr(expr, base, s, kind).value
                rel = abs(nv - tv) / abs(tv)
                if isinstance(expr, Power):
                    worst_power = max(worst_power, rel)
                    assert rel < 1e-6, (expr.describe(), kind, p, s, rel)
                else:
                    worst = max(worst, rel)
                    assert rel < 1e-7, (expr.describe(), kind, p, s, rel)
                pairs += 1
    assert pairs >= 150
    print(f"\nCRITERION 1 PASS: {pairs} (expr, s) pairs; worst rel err "
          f"{worst:.2e} (power-law route {worst_power:.2e})")


def test_criterion_2_gamma_consistency():
    p = BASE.p

    worst_integral = 0.0
    for n in range(0, 7):
        target = pq_factorial(BASE, n)
        via_integral = gamma_first_integral(BASE, float(n + 1))
        rel = abs(via_integral - target) / abs(target)
        worst_integral = max(worst_integral, rel)
        assert rel < 1e-7
        via_product = gamma_first(BASE, float(n + 1))
        assert abs(via_product - target) <= 5e-16 * abs(target)
    assert gamma_first(BASE, 4.0) == 6.08

    worst_rec = 0.0
    for z in (0.5, 1.5, 2.5):
        bracket = pq_number_real(BASE, z)
        r1 = abs(gamma_first(BASE, z + 1.0) - bracket * gamma_first(BASE, z))
        r1 /= abs(gamma_first(BASE, z + 1.0))
        r2 = abs(gamma_second(BASE, z + 1.0) - bracket * gamma_second(BASE, z))
        r2 /= abs(gamma_second(BASE, z + 1.0))
        worst_rec = max(worst_rec, r1, r2)
        assert r1 < 1e-6 and r2 < 1e-6

    # regression: dropping the corrected prefactor breaks the recurrence by
    # exactly one factor of p per step, p^(n-1) cumulatively
    def uncorrected(n: int) -> float:
        raw = first_kernel_integral(lambda t: t ** (n - 1), BASE, 1.0).value
        return p ** ((n - 1) * (n - 2) / 2) * raw

    for n in range(2, 7):
        cumulative = gamma_first_integral(BASE, float(n)) / uncorrected(n)
        assert cumulative == pytest.approx(p ** (n - 1), rel=1e-9)
        step = uncorrected(n + 1) / (pq_number(BASE, n) * uncorrected(n))
        assert step == pytest.approx(1.0 / p, rel=1e-7)
        assert abs(step - 1.0) > 0.1

    print(f"\nCRITERION 2 PASS: integral route worst {worst_integral:.2e}, "
          f"product route exact, recurrences worst {worst_rec:.2e}, "
          f"uncorrected-prefactor violation = p^(n-1) asserted")


def test_criterion_3_identity_suites():
    stated = {
        "exp-reciprocal": 1e-10,
        "trig": 1e-10,
        "hyperbolic": 1e-10,
        "product-rules": 1e-12,
        "integration-rules": 1e-9,
        "binomial": 1e-10,
    }
    report = []
    for name, tol in stated.items():
        result = run_suite(name, BASE, DEFAULT_GRID, DEFAULT_TRUNCATION)
        assert result.passed, (name, result.worst)
        assert result.max_error < tol, (name, result.max_error)
        report.append(f"{name} {result.max_error:.1e}")
    print(f"\nCRITERION 3 PASS: all suites green ({'; '.join(report)})")


def test_criterion_4_derivative_closed_forms():
    x = 0.7
    worst_rec = 0.0
    for a, b in ((1.0, 1.0), (0.5, 1.0), (-0.4, 1.3)):
        def f(t, a=a, b=b):
            return 1.0 / (a * t + b)

        for n in range(1, 7):
            closed = deriv_reciprocal_closed(BASE, a, b, n, x)
            stencil = pq_derivative_iterated(f, BASE, n, x)
            rel = abs(stencil - closed) / abs(closed)
            worst_rec = max(worst_rec, rel)
            assert rel < 1e-10, (a, b, n, rel)

    worst_lad = 0.0
    x = 0.5
    a = 0.4
    for n in range(1, 5):
        pred = a ** n * BASE.p ** binom2(n) * exp_small(BASE, a * BASE.p ** n * x)
        got = pq_derivative_iterated(lambda t: exp_small(BASE, a * t), BASE, n, x)
        rel = abs(got - pred) / abs(pred)
        worst_lad = max(worst_lad, rel)
        assert rel < 1e-9, ("small", n, rel)

        pred = a ** n * BASE.q ** binom2(n) * exp_big(BASE, a * BASE.q ** n * x)
        got = pq_derivative_iterated(lambda t: exp_big(BASE, a * t), BASE, n, x)
        rel = abs(got - pred) / abs(pred)
        worst_lad = max(worst_lad, rel)
        assert rel < 1e-9, ("big", n, rel)

    print(f"\nCRITERION 4 PASS: reciprocal closed forms worst {worst_rec:.2e} "
          f"(n <= 6), exponential ladders worst {worst_lad:.2e} (n <= 4)")


def _exact_monomial_image(n: int, pf: Fraction, qf: Fraction, first_kind: bool):
    """Image of t^n rebuilt from the image of 1 using only the
    derivative-of-transform rule, in exact rational arithmetic.

    The image is a single Laurent monomial c / s^m, carried as (c, m):
    one deformed derivative in s maps (c, m) to (-c [m]/(pq)^m, m+1).
    """
    def bracket(k: int) -> Fraction:
        return (pf ** k - qf ** k) / (pf - qf)

    shift = qf if first_kind else pf
    c, m = Fraction(1), 1          # image of 1 is 1/s
    c *= shift ** n                # substitute s -> s / shift^n
    for _ in range(n):
        c, m = -c * bracket(m) / (pf * qf) ** m, m + 1
    c *= Fraction(-1) ** n * shift ** binom2(n)
    return c, m


def test_criterion_5_transform_rule_cross_checks():
    s = 2.0

    # image-of-t^n-times-f rule vs the directly tabulated image
    worst_dot = 0.0
    F1 = transform_table(ExpSmall(0.3), BASE, TransformKind.FIRST)
    F2 = transform_table(ExpBig(0.3), BASE, TransformKind.SECOND)
    for n in (1, 2, 3):
        direct = transform_table(MonomialTimesExpSmall(n, 0.3), BASE,
                                 TransformKind.FIRST).evaluate(s, DEFAULT_TRUNCATION)
        ruled = derivative_of_transform(F1, BASE, n, s, TransformKind.FIRST)
        worst_dot = max(worst_dot, abs(ruled - direct) / abs(direct))

        direct = transform_table(MonomialTimesExpBig(n, 0.3), BASE,
                                 TransformKind.SECOND).evaluate(2.5, DEFAULT_TRUNCATION)
        ruled = derivative_of_transform(F2, BASE, n, 2.5, TransformKind.SECOND)
        worst_dot = max(worst_dot, abs(ruled - direct) / abs(direct))
    assert worst_dot < 1e-7

    # image-of-derivative rule vs the image of the differentiated expression
    worst_tod = 0.0
    for kind in (TransformKind.FIRST, TransformKind.SECOND):
        F3 = transform_table(Monomial(3), BASE, kind)
        for n in (1, 2, 3):
            coeff = pq_factorial(BASE, 3) / pq_factorial(BASE, 3 - n)
            direct = coeff * transform_table(Monomial(3 - n), BASE,
                                             kind).evaluate(s, DEFAULT_TRUNCATION)
            ruled = transform_of_derivative(F3, [0.0] * n, BASE, n, s, kind)
            worst_tod = max(worst_tod, abs(ruled - direct) / abs(direct))
    Fe = transform_table(ExpSmall(0.4), BASE, TransformKind.FIRST)
    direct = 0.4 * transform_table(ExpSmall(0.4 * BASE.p), BASE,
                                   TransformKind.FIRST).evaluate(s, DEFAULT_TRUNCATION)
    ruled = transform_of_derivative(Fe, [1.0], BASE, 1, s, TransformKind.FIRST)
    worst_tod = max(worst_tod, abs(ruled - direct) / abs(direct))
    assert worst_tod < 1e-8

    # dilation rule, closed form and quadrature
    G = scaling_apply(transform_table(ExpSmall(0.5), BASE, TransformKind.FIRST), 2.0)
    direct = transform_table(ExpSmall(1.0), BASE,
                             TransformKind.FIRST).evaluate(3.0, DEFAULT_TRUNCATION)
    gap_closed = abs(G.evaluate(3.0, DEFAULT_TRUNCATION) - direct) / abs(direct)
    nv = transform_numeric_expr(ExpSmall(1.0), BASE, 3.0, TransformKind.FIRST).value
    gap_numeric = abs(G.evaluate(3.0, DEFAULT_TRUNCATION) - nv) / abs(nv)
    assert gap_closed < 1e-12 and gap_numeric < 1e-9

    # the image of t^n via n applications of the derivative rule collapses
    # to [n]!/(b^binom(n+1,2) s^(n+1)) in exact rational arithmetic
    pf, qf = Fraction(6, 5), Fraction(4, 5)

    def bracket(k):
        return (pf ** k - qf ** k) / (pf - qf)

    for n in range(0, 7):
        fact = Fraction(1)
        for k in range(1, n + 1):
            fact *= bracket(k)
        c, m = _exact_monomial_image(n, pf, qf, first_kind=True)
        assert (c, m) == (fact / pf ** binom2(n + 1), n + 1)
        c, m = _exact_monomial_image(n, pf, qf, first_kind=False)
        assert (c, m) == (fact / qf ** binom2(n + 1), n + 1)

    print(f"\nCRITERION 5 PASS: t^n-weight rule worst {worst_dot:.2e}, "
          f"derivative-image rule worst {worst_tod:.2e}, dilation gaps "
          f"{gap_closed:.2e}/{gap_numeric:.2e}, monomial images exact "
          f"in rational arithmetic (n <= 6, both kinds)")


def test_criterion_6_solver_closed_forms():
    # decaying first-order problem
    prob1 = PQCauchyProblem(order=1, dilation_exponent=1, coefficient=0.7,
                            forcing=Const(0.0), initial_value=1.0)
    sol1 = solve_first_order(prob1, BASE)
    assert isinstance(sol1, ExpSmall)
    assert sol1.a == pytest.approx(-0.7, rel=1e-12)
    rep1 = verify_solution(prob1, sol1, BASE, SAMPLE_POINTS, tol=1e-8)
    assert rep1.passed and rep1.max_abs_residual < 1e-8

    # resonant forcing adds the secular t-times-exponential term
    lam = 0.6
    prob2 = PQCauchyProblem(order=1, dilation_exponent=1, coefficient=-lam,
                            forcing=ExpSmall(lam * BASE.q), initial_value=0.0)
    inter = first_order_transform(prob2, BASE)
    assert isinstance(inter, RationalBasic)
    assert inter.scale == pytest.approx(1.0 / BASE.p, rel=1e-12)
    assert inter.roots == pytest.approx(
        (lam / BASE.p, lam * BASE.q / BASE.p ** 2), rel=1e-12)
    sol2 = solve_first_order(prob2, BASE)
    assert isinstance(sol2, MonomialTimesExpSmall)
    assert sol2.n == 1
    assert sol2.a == pytest.approx(lam, rel=1e-12)
    rep2 = verify_solution(prob2, sol2, BASE, SAMPLE_POINTS, tol=1e-8)
    assert rep2.passed and rep2.max_abs_residual < 1e-8

    # dilated oscillator splits into the slowed circular pair
    omega, A, B = 1.1, 0.3, 1.0
    sol3 = solve_oscillator(omega, A, B, BASE)
    assert isinstance(sol3, Sum)
    parts = {type(e): (c, e) for c, e in sol3.terms}
    freq = omega / math.sqrt(BASE.p)
    c_cos, node_cos = parts[Cos]
    c_sin, node_sin = parts[Sin]
    assert c_cos == pytest.approx(B, rel=1e-12)
    assert node_cos.a == pytest.approx(freq, rel=1e-12)
    assert c_sin == pytest.approx(A * math.sqrt(BASE.p) / omega, rel=1e-12)
    assert node_sin.a == pytest.approx(freq, rel=1e-12)
    prob3 = oscillator_problem(omega, A, B)
    rep3 = verify_solution(prob3, sol3, BASE, SAMPLE_POINTS, tol=1e-8)
    assert rep3.passed and rep3.max_abs_residual < 1e-8

    print(f"\nCRITERION 6 PASS: three closed-form solutions structural; "
          f"residuals {rep1.max_abs_residual:.1e}, {rep2.max_abs_residual:.1e}, "
          f"{rep3.max_abs_residual:.1e} on {SAMPLE_POINTS}; resonant "
          f"intermediate matches the two-root rational form")


def test_criterion_7_classical_q_degeneration():
    base = PQBase(1.0, 0.5)
    q = base.q
    worst = 0.0
    for n in range(0, 7):
        qfact = 1.0
        for k in range(1, n + 1):
            qfact *= (1.0 - q ** k) / (1.0 - q)
        for s in (1.1, 2.0):
            classical = qfact / s ** (n + 1)
            expr = Monomial(n) if n else Const(1.0)
            tv = transform_table(expr, base, TransformKind.FIRST).evaluate(
                s, DEFAULT_TRUNCATION)
            nv = transform_numeric_expr(expr, base, s, TransformKind.FIRST).value
            rel = max(abs(tv - classical), abs(nv - classical)) / abs(classical)
            worst = max(worst, rel)
            assert rel < 1e-9, (n, s, rel)
    print(f"\nCRITERION 7 PASS: p = 1 transforms match the classical "
          f"q-factorial images, worst rel err {worst:.2e}")


def test_criterion_8_cli_examples_and_round_trip(capsys):
    common = ["--p", "1.2", "--q", "0.8"]

    code = run_command(["transform", "--fn", "t^3", *common, "--s", "1",
                        "--kind", "first", "--mode", "both"])
    out = capsys.readouterr().out
    assert code == 0
    rec = json.loads(out)
    assert rec["value"]["table"] == pytest.approx(6.08 / 1.2 ** 6, rel=1e-15)
    assert rec["value"]["relative_gap"] < 1e-7

    code = run_command(["identity-check", "--suite", "exp-reciprocal", *common])
    out = capsys.readouterr().out
    assert code == 0
    rec = json.loads(out)
    assert rec["value"]["passed"] is True
    assert rec["value"]["max_error"] < 1e-10

    code = run_command(["gamma", "--kind", "first", "--z", "4", *common])
    out = capsys.readouterr().out
    assert code == 0
    assert json.loads(out)["value"] == 6.08

    rng = random.Random(20260819)
    invocations = 0
    while invocations < 20:
        choice = invocations % 6
        if choice == 0:
            argv = ["eval", "e", "--z", str(rng.uniform(-1.5, 1.5))]
        elif choice == 1:
            argv = ["eval", "E", "--z", str(rng.uniform(-2.0, 2.0))]
        elif choice == 2:
            argv = ["derivative", "--fn", f"t^{rng.randint(1, 5)}",
                    "--n", str(rng.randint(1, 2)), "--x", str(rng.uniform(0.3, 2.0))]
        elif choice == 3:
            argv = ["integrate", "--fn", f"t^{rng.randint(1, 5)}",
                    "--upper", str(rng.uniform(0.5, 2.0))]
        elif choice == 4:
            argv = ["transform", "--fn", f"t^{rng.randint(0, 6)}",
                    "--s", str(rng.uniform(0.8, 3.0)), "--mode", "both"]
        else:
            argv = ["gamma", "--kind", rng.choice(["first", "second"]),
                    "--z", str(rng.choice([1.0, 2.0, 2.5, 4.0]))]
        code = run_command(argv + common)
        out = capsys.readouterr().out
        assert code == 0, argv
        rec = json.loads(out)
        assert list(rec) == sorted(rec)
        replay = dispatch(rec["command"], rec["inputs"])
        assert replay["value"] == rec["value"], argv
        invocations += 1

    print(f"\nCRITERION 8 PASS: three documented invocations exact; "
          f"{invocations} randomized records replay bitwise")
