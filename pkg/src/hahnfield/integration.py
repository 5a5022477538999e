"""Asymptotic integrals and integration by valuation-guided refinement.

An asymptotic integral of ``a`` is any ``b`` with ``v(d(b) - a) > v(a)``.
Under (H3) every monomial outside the class of ``theta~`` has a monomial
one, found by locating the unique index ``psi`` with

    alpha - theta_psi = gamma_0 * 1_psi + (terms at larger indices),  gamma_0 != 0.

Full integrals are then built by repeatedly integrating the leading term of
the residual ``a - d(b)``; the residual valuation strictly increases at every
step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .derivation import NOT_ATTAINED, DerivationSpec, derive
from .errors import MathError, NoAsymptoticIntegral
from .series import DEFAULT_MAX_TERMS, Series, invert

DEFAULT_MAX_ITERS = 64


def monomial_ai(a: Series, spec: DerivationSpec) -> Series:
    """Monomial asymptotic integral of the leading term of ``a``."""
    if a.is_zero:
        raise MathError("the zero series has no asymptotic integral")
    if not spec.report.h3_ok:
        raise MathError("monomial asymptotic integrals need (H3)")
    alpha, c = a.leading()
    tilde = spec.theta_tilde
    if tilde is not NOT_ATTAINED and alpha == tilde:
        raise NoAsymptoticIntegral("v(a) equals theta~: no asymptotic integral")
    psi = spec.psi(alpha)
    if psi is None:
        raise MathError(f"internal: no psi found for {alpha!r}")
    beta = alpha - spec.theta(psi)
    gamma0 = beta[psi]
    return Series.monomial(beta, c / (gamma0 * spec.lead_coeff(psi)), a.spine)


def contract_holds(b: Series, a: Series, deriv: Callable[[Series], Series]) -> bool:
    """``v(d(b) - a) > v(a)``, decided only from known terms."""
    r = deriv(b) - a
    if r.is_zero:
        return True
    low = r.low()
    return low is not None and a.leading()[0] < low


@dataclass
class RosenlichtResult:
    value: Series
    u_used: Series
    verified: bool
    attempts: int


def rosenlicht_formula(a: Series, u: Series, deriv: Callable[[Series], Series],
                       max_terms: int = DEFAULT_MAX_TERMS) -> Series:
    """``a * w / d(w)`` with ``w = a * u / d(u)``."""
    du = deriv(u)
    if du.is_zero:
        raise MathError("d(u) = 0")
    w = a * u * invert(du, max_terms)
    dw = deriv(w)
    if dw.is_zero:
        raise MathError("d(a u / d(u)) = 0")
    return (a * w * invert(dw, max_terms)).truncate(max_terms)


def _spine_candidates(a: Series) -> list[Series]:
    spine = a.spine
    if spine.is_finite:
        idx = list(spine.indices)
    else:
        top = max((e.max_index() for e, _ in a.terms), default=0)
        idx = list(range(top + 3))
    return [Series.t(i, spine) for i in idx]


def rosenlicht_search(a: Series, candidates: Iterable[Series],
                      deriv: Callable[[Series], Series],
                      max_terms: int = DEFAULT_MAX_TERMS) -> RosenlichtResult:
    """Try each test monomial in turn until the asymptotic-integral contract holds."""
    if a.is_zero:
        raise MathError("the zero series has no asymptotic integral")
    last = None
    n = 0
    for u in candidates:
        if u.is_zero or u.leading()[0].is_zero:
            continue
        n += 1
        try:
            b = rosenlicht_formula(a, u, deriv, max_terms)
        except MathError:
            continue
        ok = contract_holds(b, a, deriv)
        last = RosenlichtResult(b, u, ok, n)
        if ok:
            return last
    if last is None:
        raise MathError("no usable test monomial for the asymptotic integral")
    return last


def rosenlicht_ai(a: Series, u: Series | None, spec: DerivationSpec,
                  max_terms: int = DEFAULT_MAX_TERMS) -> RosenlichtResult:
    """Asymptotic integral from the generic formula, with contract verification.

    ``u`` is tried first; when it fails (``d(u) = 0`` on the way, or the
    contract does not hold) the leading monomial of ``a`` and then the
    spine monomials ``t_phi`` in ascending index are tried.
    """
    cands: list[Series] = []
    if u is not None:
        cands.append(u)
    alpha = a.leading()[0]
    if not alpha.is_zero:
        cands.append(Series.monomial(alpha, 1, a.spine))
    cands.extend(_spine_candidates(a))
    return rosenlicht_search(a, cands, lambda s: derive(s, spec), max_terms)


@dataclass
class IntegrationResult:
    value: Series
    residual: Series
    exact: bool
    iterations: int
    status: str = "exact"  # exact | budget | non-integrable
    valuations: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .render import series_to_json
        return {
            "value": series_to_json(self.value),
            "residual": series_to_json(self.residual),
            "exact": self.exact,
            "iterations": self.iterations,
        }


def refine(a: Series, step: Callable[[Series], Series], deriv: Callable[[Series], Series],
           max_iters: int = DEFAULT_MAX_ITERS, max_terms: int = DEFAULT_MAX_TERMS,
           ) -> IntegrationResult:
    """Shared refinement loop: ``b += step(r)``, ``r = a - d(b)``."""
    b = Series.zero(a.spine)
    r = a
    vals = []
    status = "budget"
    it = 0
    while True:
        if r.is_zero:
            status = "exact"
            break
        if not r.terms or it >= max_iters or len(b.terms) >= max_terms:
            break
        v = r.terms[0][0]
        vals.append(v)
        try:
            m = step(r)
        except NoAsymptoticIntegral:
            status = "non-integrable"
            break
        b = b + m
        r_next = a - deriv(b)
        if not r_next.is_zero:
            low = r_next.low()
            if low is None or not v < low:
                raise MathError("residual valuation failed to increase")
        r = r_next
        it += 1
    return IntegrationResult(b, r, r.is_zero, it, status, vals)


def integrate(a: Series, spec: DerivationSpec, max_terms: int = DEFAULT_MAX_TERMS,
              max_iters: int = DEFAULT_MAX_ITERS) -> IntegrationResult:
    """Integral of ``a`` as far as the budgets allow."""
    if not spec.report.h3_ok:
        raise MathError("integration needs (H3)")
    return refine(a, lambda r: monomial_ai(r, spec), lambda s: derive(s, spec),
                  max_iters, max_terms)
