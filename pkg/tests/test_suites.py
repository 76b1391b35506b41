"""Identity-check suites: every suite green at its stated tolerance."""

import pytest

from pqcalc.arith import PQBase
from pqcalc.errors import PQDomainError
from pqcalc.suites import run_suite, suite_names

EXPECTED_SUITES = {
    "exp-reciprocal",
    "trig",
    "hyperbolic",
    "gamma-recurrence",
    "product-rules",
    "transform-oracle",
    "integration-rules",
    "binomial",
}

STATED_TOLERANCES = {
    "exp-reciprocal": 1e-10,
    "trig": 1e-10,
    "hyperbolic": 1e-10,
    "gamma-recurrence": 1e-6,
    "product-rules": 1e-12,
    "transform-oracle": 1e-7,
    "integration-rules": 1e-9,
    "binomial": 1e-10,
}


def test_suite_names_complete():
    assert set(suite_names()) == EXPECTED_SUITES


@pytest.mark.parametrize("name", sorted(EXPECTED_SUITES))
def test_suite_passes_at_reference_base(name):
    result = run_suite(name, PQBase(1.2, 0.8))
    assert result.passed, result.worst
    assert result.suite == name
    assert result.tolerance == STATED_TOLERANCES[name]
    assert result.max_error < result.tolerance
    assert result.checks > 0


@pytest.mark.parametrize("name", sorted(EXPECTED_SUITES))
def test_suite_passes_at_second_base(name):
    result = run_suite(name, PQBase(1.5, 0.9))
    assert result.passed, result.worst
    assert result.max_error < result.tolerance


def test_exp_reciprocal_runs_series_only_base():
    # needs no grid sums, so the inverted pair q > p is fine
    result = run_suite("exp-reciprocal", PQBase(0.8, 1.2))
    assert result.passed


def test_unknown_suite_rejected():
    with pytest.raises(PQDomainError, match="choose from"):
        run_suite("nope", PQBase(1.2, 0.8))


def test_result_reports_worst_check():
    result = run_suite("trig", PQBase(1.2, 0.8))
    assert result.worst
    assert result.max_error >= 0.0
