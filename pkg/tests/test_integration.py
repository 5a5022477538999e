from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from hahnfield import (
    ZERO, Exponent, MathError, NoAsymptoticIntegral, Series, derive, integrate,
    monomial_ai, rosenlicht_ai,
)
from hahnfield.integration import contract_holds

from generators import LEH3_SPINE, NAT, exponents, nonzero_series, series

S = LEH3_SPINE


@pytest.fixture(scope="module")
def d3(leh3):
    return leh3.dspec


def t(i, p=1):
    return Series.t(i, S, p)


def test_monomial_ai_examples(d3):
    b = monomial_ai(t(2), d3)
    assert b == t(3, -1)
    assert derive(b, d3) == t(2)
    b = monomial_ai(t(2) ** 2, d3)
    assert b == -t(2)
    assert derive(b, d3) == t(2) ** 2
    with pytest.raises(NoAsymptoticIntegral):
        monomial_ai(t(2) * t(3), d3)
    with pytest.raises(MathError):
        monomial_ai(Series.zero(S), d3)


def test_psi_is_unique_on_finite_spine(d3):
    for v in [(0, 0, 0), (1, -2, 3), (0, 1, 0), (0, 0, 5), (2, 2, 2), (0, 1, 2)]:
        alpha = Exponent.from_tuple(v, S)
        hits = [i for i in S if (alpha - d3.theta(i)).v_gamma() == i]
        assert len(hits) == 1


def test_rosenlicht_examples(d3):
    res = rosenlicht_ai(t(2), t(2), d3, 8)
    assert res.verified
    assert res.value.leading() == (Exponent.unit(3, -1), 1)
    # with u = t1 the formula degenerates (d(w) = 0); the search falls back
    one = Series.const(1, S)
    res = rosenlicht_ai(one, t(1), d3, 8)
    assert res.verified
    assert res.value.leading() == (Exponent.unit(2, -1), 1)
    assert res.u_used != t(1)


def test_rosenlicht_reports_failure(d3):
    # only theta~-class candidates: the contract cannot be met
    res = rosenlicht_ai(t(2) * t(3), t(3), d3, 6)
    assert not res.verified


def test_integrate_examples(d3):
    r = integrate(t(2), d3)
    assert (r.value, r.residual.is_zero, r.exact, r.iterations) == (t(3, -1), True, True, 1)
    r = integrate(t(2) ** 2 + t(2) ** 3, d3)
    assert r.exact and r.value == -t(2) - Fraction(1, 2) * t(2) ** 2
    r = integrate(Series.zero(S), d3)
    assert r.exact and r.value.is_zero and r.iterations == 0
    assert r.to_json()["exact"] is True


def test_integrate_reports_theta_tilde(d3):
    r = integrate(t(2) + t(2) * t(3), d3)
    assert r.status == "non-integrable"
    assert not r.exact
    assert r.residual.leading()[0] == d3.theta_tilde
    assert r.value == t(3, -1)


def test_integrate_budget(d3):
    # e^{-x}/x has no finite integral in this field
    r = integrate(t(1) * t(2), d3, max_iters=5)
    assert r.status == "budget" and not r.exact and r.iterations == 5
    assert derive(r.value, d3) + r.residual == t(1) * t(2)


@settings(max_examples=200)
@given(nonzero_series())
def test_contract_leh3(d3, a):
    if a.leading()[0] == d3.theta_tilde:
        return
    b = monomial_ai(a, d3)
    assert contract_holds(b, a, lambda s: derive(s, d3))


@settings(max_examples=100)
@given(nonzero_series(NAT, 3))
def test_contract_logs(logs, a):
    b = monomial_ai(a, logs.dspec)
    assert contract_holds(b, a, logs.derive)


@settings(max_examples=100, deadline=None)
@given(series())
def test_round_trip(d3, b):
    a = derive(b, d3)
    r = integrate(a, d3)
    assert r.exact
    assert derive(r.value, d3) == a
    vals = r.valuations
    assert all(x < y for x, y in zip(vals, vals[1:]))


@settings(max_examples=60, deadline=None)
@given(exponents())
def test_rosenlicht_agrees_with_monomial_formula(d3, alpha):
    if alpha == d3.theta_tilde:
        return
    a = Series.monomial(alpha, 1, S)
    u = a if alpha != ZERO else None
    res = rosenlicht_ai(a, u, d3, 6)
    assert res.verified
    assert res.value.leading() == monomial_ai(a, d3).leading()
