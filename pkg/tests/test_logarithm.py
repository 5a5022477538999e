from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from hahnfield import (
    ZERO, Exponent, HookUndefined, MathError, Series, derive, log1p_unit, log_series,
    prelog_monomial, validate_prelog,
)
from hahnfield.logarithm import (
    DerivedPreLog, SigmaShiftPreLog, TablePreLog, exp_infinitesimal, exp_series,
)
from hahnfield.series import RATIONAL_HOOKS

from generators import LEH3_SPINE, NAT, exponents

S = LEH3_SPINE


def t(i, p=1, spine=S):
    return Series.t(i, spine, p)


def n(i, p=1):
    return Series.t(i, NAT, p)


def test_log1p_examples():
    assert log1p_unit(t(2), 3).terms == (t(2) - Fraction(1, 2) * t(2) ** 2
                                         + Fraction(1, 3) * t(2) ** 3).terms
    z = log1p_unit(Series.zero(S), 3)
    assert z.is_zero and z.exact
    eps = t(1) * t(2, -1)
    assert log1p_unit(eps, 2).terms == (eps - Fraction(1, 2) * eps ** 2).terms
    assert not log1p_unit(eps, 2).exact
    with pytest.raises(MathError):
        log1p_unit(t(2, -1), 3)


def test_log1p_exp_inverse():
    eps = t(2) + t(3) * t(2)
    back = exp_infinitesimal(log1p_unit(eps, 10), 10) - 1
    assert back.agrees(eps)


def test_prelog_monomial_logs(logs):
    p = logs.pspec
    assert prelog_monomial(Exponent.unit(0, -1), p) == n(1, -1)
    assert prelog_monomial(ZERO, p).is_zero
    assert prelog_monomial(Exponent({0: -1, 1: -1}), p) == n(1, -1) + n(2, -1)


def test_prelog_partial_in_leh3(leh3):
    p = leh3.pspec
    assert p.logmono(1) == -t(2, -1)
    assert p.logmono(2) == -t(3, -1)
    assert not p.defined(3)
    with pytest.raises(MathError):
        prelog_monomial(Exponent.unit(3), p)


def test_from_derivation_matches_shift_on_logs(logs):
    derived = DerivedPreLog(logs.dspec)
    for i in range(6):
        assert derived.logmono(i) == logs.pspec.logmono(i)


def test_log_series_examples(logs):
    a = n(0, -1) * (1 + n(0))
    got = log_series(a, logs.pspec, RATIONAL_HOOKS, 6)
    assert got.terms[:3] == (n(1, -1) + n(0) - Fraction(1, 2) * n(0) ** 2).terms
    assert log_series(Series.const(1, NAT), logs.pspec, RATIONAL_HOOKS).is_zero
    with pytest.raises(HookUndefined):
        log_series(n(0, -1).scale(2), logs.pspec, RATIONAL_HOOKS)
    with pytest.raises(MathError):
        log_series(-n(0), logs.pspec, RATIONAL_HOOKS)


def test_exp_series_needs_prelog_image(leh3):
    assert exp_series(-t(2, -1), leh3.pspec, RATIONAL_HOOKS) == t(1)
    with pytest.raises(MathError):
        exp_series(t(1, -1), leh3.pspec, RATIONAL_HOOKS)


def test_validate_leh3(leh3):
    rep = validate_prelog(leh3.dspec, leh3.pspec)
    assert not rep.condition1_ok
    assert ("condition1", 3, Exponent.from_tuple((0, 1, 1), S)) in rep.witnesses
    assert rep.condition2_ok and rep.compatible_ok and rep.ga_ok
    assert not rep.complete and not rep.ok


def test_validate_logs(logs):
    rep = validate_prelog(logs.dspec, logs.pspec)
    assert rep.ok and rep.symbolic
    for i in range(8):
        assert logs.pspec.logmono(i) == -n(i + 1, -1)
        assert derive(logs.pspec.logmono(i), logs.dspec) == logs.dspec.logderiv(i)


def test_growth_violation_detected(leh3):
    bad = TablePreLog(S, {1: t(2), 2: -t(3, -1), 3: -t(3, -1)})
    rep = validate_prelog(leh3.dspec, bad)
    assert not rep.ga_ok
    assert any(w[0] == "growth" and w[1] == 1 for w in rep.witnesses)


def test_wrong_sign_shift_is_incompatible(logs):
    # valuations are unchanged by the sign, so only compatibility catches it
    rep = validate_prelog(logs.dspec, SigmaShiftPreLog(+1))
    assert not rep.compatible_ok and rep.ga_ok and not rep.ok


def _positive(e, spine):
    return Series.monomial(e, 1, spine)


@settings(max_examples=100, deadline=None)
@given(exponents(NAT), exponents(NAT), exponents(NAT), exponents(NAT))
def test_morphism_law(logs, e1, e2, f1, f2):
    one = Series.const(1, NAT)
    a = _positive(e1, NAT) * (one + _positive(abs(e2), NAT) if e2 != ZERO else one)
    b = _positive(f1, NAT) * (one + _positive(abs(f2), NAT) if f2 != ZERO else one)
    L = lambda s: log_series(s, logs.pspec, RATIONAL_HOOKS, 12)
    assert L(a * b).agrees(L(a) + L(b))


@given(exponents(NAT))
def test_growth_axiom(logs, alpha):
    if not alpha < ZERO:
        return
    assert prelog_monomial(alpha, logs.pspec).leading()[0] > alpha


@settings(max_examples=100, deadline=None)
@given(exponents(NAT), exponents(NAT))
def test_log_differential_equation(logs, e, f):
    a = _positive(e, NAT)
    if f != ZERO:
        a = a * (1 + _positive(abs(f), NAT))
    lhs = logs.derive(log_series(a, logs.pspec, RATIONAL_HOOKS, 10))
    assert lhs.agrees(logs.logderiv(a))
