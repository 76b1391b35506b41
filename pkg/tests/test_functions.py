"""Special functions: twin exponentials, trig pairs, Gamma, hypergeometric."""

import math

import pytest

from pqcalc.arith import PQBase, binom2, pq_factorial, pq_number, pq_number_real
from pqcalc.errors import DivergenceError, PQDomainError, PoleError
from pqcalc.functions import (
    HypergeomSpec,
    TrigKind,
    exp_big,
    exp_big_info,
    exp_big_zeros_start,
    exp_radius,
    exp_small,
    exp_small_info,
    first_kernel_integral,
    gamma_first,
    gamma_first_integral,
    gamma_second,
    hypergeom_phi,
    trig_eval,
)

B = PQBase(1.2, 0.8)

# 60-digit mpmath series references at (p, q) = (1.2, 0.8)
EXP_SMALL_REF = {
    0.5: 1.694635268337043,
    -1.0: 0.40073738220999244,
    2.0: 14.43583192407497,
}
EXP_BIG_REF = {
    2.0: 5.467240889724449,
    -2.0: 0.06927207280186443,
}
TRIG_REF = {
    (TrigKind.COS_SMALL, 0.3): 0.9469443184437448,
    (TrigKind.SIN_SMALL, 0.3): 0.292435175445,
    (TrigKind.COS_SMALL, 2.0): -0.2164890066448556,
    (TrigKind.COS_BIG, 2.0): -0.43658434346852576,
    (TrigKind.SIN_BIG, 2.0): 1.3513150525047226,
    (TrigKind.COSH_SMALL, 0.4): 1.0990914415933173,
    (TrigKind.COSH_BIG, 1.0): 1.4104022152354496,
    (TrigKind.SINH_SMALL, 0.4): 0.4186633463812544,
}


def test_exp_small_reference_values():
    for z, want in EXP_SMALL_REF.items():
        assert exp_small(B, z) == pytest.approx(want, rel=2e-15)


def test_exp_big_reference_values():
    for z, want in EXP_BIG_REF.items():
        assert exp_big(B, z) == pytest.approx(want, rel=2e-15)


def test_exp_radius_and_zero_lattice():
    assert exp_radius(B) == pytest.approx(3.0, rel=1e-15)
    assert exp_big_zeros_start(B) == pytest.approx(3.0, rel=1e-15)
    assert math.isinf(exp_radius(PQBase(0.8, 1.2)))


def test_exp_small_pole_ray():
    # poles of the continuation product at z = radius * (p/q)^k
    with pytest.raises(PoleError):
        exp_small(B, 3.0)
    with pytest.raises(PoleError):
        exp_small(B, 4.5)


def test_exp_small_between_poles():
    # continuation product is finite between consecutive poles
    got = exp_small(B, 4.0)
    assert got == pytest.approx(-259.6886188965537, rel=1e-12)
    assert abs(exp_small(B, 4.0) * exp_big(B, -4.0) - 1.0) < 5e-16


def test_reciprocal_identity():
    zs = [z / 5.0 for z in range(-10, 11) if z != 0]
    for z in zs:
        assert exp_small(B, z) * exp_big(B, -z) == pytest.approx(1.0, rel=1e-12)


def test_exp_big_is_entire():
    assert math.isfinite(exp_big(B, 50.0))
    assert exp_big(B, 50.0) > 0.0


def test_eval_paths():
    assert exp_small_info(B, 0.5).path == "series"
    assert exp_small_info(B, 2.9).path == "product"
    assert exp_big_info(B, 2.0).path == "series"
    assert exp_big_info(B, 10.0).path == "product"
    info = exp_small_info(B, 0.5)
    assert info.terms_used > 0
    assert info.tail_estimate >= 0.0


def test_trig_reference_values():
    for (kind, z), want in TRIG_REF.items():
        assert trig_eval(kind, B, z) == pytest.approx(want, rel=2e-15)


def test_trig_duality_under_base_swap():
    # small-family at (p, q) equals big-family at (q, p)
    swapped = PQBase(0.8, 1.2)
    pairs = [
        (TrigKind.COS_SMALL, TrigKind.COS_BIG),
        (TrigKind.SIN_SMALL, TrigKind.SIN_BIG),
        (TrigKind.COSH_SMALL, TrigKind.COSH_BIG),
        (TrigKind.SINH_SMALL, TrigKind.SINH_BIG),
    ]
    for small, big in pairs:
        for z in (0.25, 0.5, 1.0, 1.5):
            assert trig_eval(small, B, z) == pytest.approx(
                trig_eval(big, swapped, z), rel=1e-14
            )


def _series_even(base, weight, z, sigma, terms=16):
    return sum(
        sigma**m * weight ** binom2(2 * m) * z ** (2 * m) / pq_factorial(base, 2 * m)
        for m in range(terms)
    )


def _series_odd(base, weight, z, sigma, terms=16):
    return sum(
        sigma**m
        * weight ** binom2(2 * m + 1)
        * z ** (2 * m + 1)
        / pq_factorial(base, 2 * m + 1)
        for m in range(terms)
    )


def test_trig_explicit_coefficient_formulas():
    # first 30+ coefficients: weight p for the small family, q for the big
    z = 0.7
    cases = [
        (TrigKind.COS_SMALL, _series_even, B.p, -1.0),
        (TrigKind.SIN_SMALL, _series_odd, B.p, -1.0),
        (TrigKind.COSH_SMALL, _series_even, B.p, 1.0),
        (TrigKind.SINH_SMALL, _series_odd, B.p, 1.0),
        (TrigKind.COS_BIG, _series_even, B.q, -1.0),
        (TrigKind.SIN_BIG, _series_odd, B.q, -1.0),
        (TrigKind.COSH_BIG, _series_even, B.q, 1.0),
        (TrigKind.SINH_BIG, _series_odd, B.q, 1.0),
    ]
    for kind, series, weight, sigma in cases:
        want = series(B, weight, z, sigma)
        assert trig_eval(kind, B, z) == pytest.approx(want, rel=5e-14)


def test_small_trig_radius_guard():
    with pytest.raises(PQDomainError, match="converges only"):
        trig_eval(TrigKind.COS_SMALL, B, 3.5)
    with pytest.raises(PQDomainError):
        trig_eval(TrigKind.SIN_SMALL, B, -4.0)


def test_big_trig_is_entire():
    assert math.isfinite(trig_eval(TrigKind.COS_BIG, B, 10.0))


def test_gamma_integer_product_route():
    # tail cancellation leaves the finite product; spec-pinned instance is exact
    assert gamma_first(B, 4.0) == 6.08
    for p in (1.1, 1.2, 1.5):
        base = PQBase(p, 0.6 * p)
        for n in range(7):
            got = gamma_first(base, float(n + 1))
            assert got == pytest.approx(pq_factorial(base, n), rel=5e-16)


def test_gamma_integral_route():
    for p in (1.1, 1.2, 1.5):
        base = PQBase(p, 0.6 * p)
        for n in range(7):
            got = gamma_first_integral(base, float(n + 1))
            assert got == pytest.approx(pq_factorial(base, n), rel=1e-12)


def test_gamma_recurrence_fractional():
    for fn in (gamma_first, gamma_second):
        for z in (0.5, 1.5, 2.5):
            lhs = fn(B, z + 1.0)
            rhs = pq_number_real(B, z) * fn(B, z)
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_gamma_second_at_one():
    assert gamma_second(B, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_gamma_uncorrected_prefactor_regression():
    # with prefactor p^{(z-1)(z-2)/2} the integral misses Gamma by p^(z-1)
    # and the recurrence Gamma(z+1) = [z] Gamma(z) breaks by a factor 1/p
    def uncorrected(base, n):
        raw = first_kernel_integral(lambda t: t ** (n - 1.0), base, 1.0).value
        return base.p ** ((n - 1) * (n - 2) / 2.0) * raw

    for n in range(1, 8):
        unc = uncorrected(B, n)
        assert pq_factorial(B, n - 1) / unc == pytest.approx(B.p ** (n - 1), rel=1e-9)
    for n in range(1, 7):
        ratio = uncorrected(B, n + 1) / (pq_number(B, n) * uncorrected(B, n))
        assert ratio == pytest.approx(1.0 / B.p, rel=1e-9)
        assert abs(ratio - 1.0) > 0.1


def test_gamma_domain_errors():
    with pytest.raises(PQDomainError):
        gamma_first(B, 0.0)
    with pytest.raises(PQDomainError):
        gamma_second(B, -1.5)
    with pytest.raises(PQDomainError, match="full-grid"):
        gamma_first(PQBase(0.8, 1.2), 0.5)


def test_first_kernel_integral_of_one():
    # L{1}(s) = 1/s at a generic s (no special alignment of s required)
    s = 2.317
    info = first_kernel_integral(lambda t: 1.0, B, s)
    assert info.value == pytest.approx(1.0 / s, rel=1e-12)
    with pytest.raises(PQDomainError):
        first_kernel_integral(lambda t: 1.0, B, 0.0)


def test_first_kernel_integral_respects_cutoff():
    # the integrand beyond the first kernel zero is never evaluated
    s = 2.317
    t0 = exp_big_zeros_start(B) / (B.q * s)
    seen = []

    def f(t):
        seen.append(t)
        return 1.0

    first_kernel_integral(f, B, s)
    assert max(seen) < t0


def test_hypergeom_binomial_value():
    # 1phi0((1, 0.6); -; 0.3) against the 60-digit pochhammer-ratio oracle
    got = hypergeom_phi(HypergeomSpec(((1.0, 0.6),)), B, 0.3)
    assert got == pytest.approx(1.4093425781518758, rel=2e-15)


def test_hypergeom_divergence():
    # term ratio tends to a z / p, so |z| > p/a diverges
    with pytest.raises(DivergenceError):
        hypergeom_phi(HypergeomSpec(((1.0, 0.6),)), B, 2.0)


def test_hypergeom_vanishing_denominator_pair():
    with pytest.raises(PQDomainError, match="vanishes"):
        hypergeom_phi(HypergeomSpec(((1.0, 0.5),), ((0.8, 1.2),)), B, 0.2)
