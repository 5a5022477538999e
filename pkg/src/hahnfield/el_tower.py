"""The exponential-logarithmic tower over a field with a pre-logarithm.

Level ``n + 1`` adjoins a monomial ``t^p`` for every purely infinite series
``p`` of level ``n``, with ``log(t^p) = p``.  Level-0 exponents are
identified with their images under the pre-logarithm, so a new exponent is
only created when ``p`` is not already ``log(t^alpha)`` for some ``alpha``
(canonical form).  The tower is represented lazily: levels are created on
demand up to a depth budget.

Exponent order in the tower is the reverse of the order of the logarithms:
``e < f`` iff ``log(t^e) > log(t^f)``.  The derivation extends by
``d(t^e) = d(log t^e) * t^e``.
"""

from __future__ import annotations

from fractions import Fraction

from .derivation import DerivationSpec
from .errors import ConfigurationError, DepthError, MathError
from .hahn_group import ZERO, Exponent
from .integration import (
    DEFAULT_MAX_ITERS, IntegrationResult, contract_holds, monomial_ai, refine,
    rosenlicht_search,
)
from .logarithm import (
    PreLogSpec, exp_infinitesimal, log1p_unit, prelog_monomial, unit_part,
    validate_prelog,
)
from .series import DEFAULT_MAX_TERMS, CoefficientHooks, Series, compare_series


class Big:
    """Tower exponent ``e`` with ``log(t^e) = payload`` (a purely infinite series)."""

    __slots__ = ("payload", "tower", "canonical", "_hash")

    def __init__(self, payload: Series, tower: Tower, canonical: bool = True):
        self.payload = payload
        self.tower = tower
        self.canonical = canonical
        self._hash = None

    @property
    def level(self) -> int:
        return self.payload.level + 1

    is_zero = False

    def __bool__(self) -> bool:
        return True

    def normal_form(self):
        if self.canonical:
            return self
        p = self.payload.map_exponents(_normal)
        return self.tower.make_exponent(p, check_depth=False)

    def sign(self) -> int:
        return -self.payload.sign()

    def max_index(self) -> int:
        out = -1
        for e, _ in self.payload.terms:
            out = max(out, e.max_index())
        return out

    # -- group law ----------------------------------------------------------

    # The pre-log image is a subgroup, so adding a level-0 exponent or scaling
    # never moves a canonical payload into it: those results need no demotion.

    def __add__(self, other):
        if isinstance(other, Exponent):
            return Big(self.payload + self.tower.payload(other), self.tower, self.canonical)
        if not isinstance(other, Big):
            return NotImplemented
        return self.tower.make_exponent(self.payload + other.payload, check_depth=False)

    __radd__ = __add__

    def __neg__(self):
        return Big(-self.payload, self.tower, self.canonical)

    def __sub__(self, other):
        if isinstance(other, Exponent):
            return Big(self.payload - self.tower.payload(other), self.tower, self.canonical)
        if not isinstance(other, Big):
            return NotImplemented
        return self.tower.make_exponent(self.payload - other.payload, check_depth=False)

    def __rsub__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return Big(self.tower.payload(other) - self.payload, self.tower, self.canonical)

    def __mul__(self, q):
        if not isinstance(q, (int, Fraction)):
            return NotImplemented
        if q == 0:
            return ZERO
        return Big(self.payload.scale(q), self.tower, self.canonical)

    __rmul__ = __mul__

    # -- order ----------------------------------------------------------------

    def cmp(self, other) -> int:
        tw = self.tower
        return -compare_series(self.payload, tw.payload(other))

    def __lt__(self, other):
        if not isinstance(other, (Exponent, Big)):
            return NotImplemented
        return self.cmp(other) < 0

    def __le__(self, other):
        if not isinstance(other, (Exponent, Big)):
            return NotImplemented
        return self.cmp(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (Exponent, Big)):
            return NotImplemented
        return self.cmp(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (Exponent, Big)):
            return NotImplemented
        return self.cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, Exponent):
            return not self.canonical and self.normal_form() == other
        if not isinstance(other, Big):
            return NotImplemented
        a, b = self.normal_form(), other.normal_form()
        if isinstance(a, Big) and isinstance(b, Big):
            return a.payload == b.payload
        return a == b

    def __hash__(self) -> int:
        if self._hash is None:
            n = self.normal_form()
            self._hash = hash(("Big", n.payload)) if isinstance(n, Big) else hash(n)
        return self._hash

    def __repr__(self) -> str:
        from .render import render_series
        return f"Big({render_series(self.payload)!r})"


def _normal(e):
    return e.normal_form() if isinstance(e, Big) else e


class Tower:
    """EL closure of a base field, bounded by ``depth`` levels."""

    def __init__(self, dspec: DerivationSpec, pspec: PreLogSpec,
                 hooks: CoefficientHooks, depth: int = 3,
                 max_terms: int = DEFAULT_MAX_TERMS):
        report = validate_prelog(dspec, pspec)
        if not report.ok:
            raise ConfigurationError("this field does not admit the exponential tower: "
                                     f"{report.witnesses[:3]}")
        self.dspec = dspec
        self.pspec = pspec
        self.hooks = hooks
        self.depth = depth
        self.max_terms = max_terms
        self.spine = dspec.spine
        self.report = report
        self._ld_cache: dict = {}
        self._payload_cache: dict = {}

    # -- exponents --------------------------------------------------------------

    def payload(self, e) -> Series:
        """``log(t^e)``."""
        if isinstance(e, Big):
            return e.payload
        out = self._payload_cache.get(e)
        if out is None:
            out = prelog_monomial(e, self.pspec)
            self._payload_cache[e] = out
        return out

    def make_exponent(self, p: Series, check_depth: bool = True):
        """Canonical exponent ``e`` with ``log(t^e) = p``."""
        if not p.exact:
            raise MathError("exponent payloads must be exact")
        if p.is_zero:
            return ZERO
        if any(not e < ZERO for e, _ in p.terms):
            raise MathError("exponent payloads must be purely infinite")
        if p.level == 0:
            alpha = self.pspec.inverse(p)
            if alpha is not None:
                return alpha
        e = Big(p, self)
        if check_depth and e.level > self.depth:
            raise DepthError(f"level {e.level} exceeds the tower depth {self.depth}")
        return e

    def lift_exponent(self, e, level: int):
        """Re-express ``e`` at ``level`` without canonicalizing."""
        if e.level >= level or (isinstance(e, Exponent) and e.is_zero):
            return e
        return Big(self.lift(self.payload(e), level - 1), self, canonical=False)

    def lift(self, x: Series, level: int) -> Series:
        if level > self.depth:
            raise DepthError(f"level {level} exceeds the tower depth {self.depth}")
        return Series._raw(tuple((self.lift_exponent(e, level), c) for e, c in x.terms),
                           x.spine,
                           None if x.precision is None
                           else self.lift_exponent(x.precision, level))

    def archimedean_class(self, e):
        """Class of a nonzero exponent: the leading exponent of its logarithm."""
        return self.payload(e).leading()[0]

    def archimedean_equiv(self, e, f) -> bool:
        ez, fz = e == ZERO, f == ZERO
        if ez or fz:
            return ez and fz
        return self.archimedean_class(e) == self.archimedean_class(f)

    # -- calculus -----------------------------------------------------------------

    def monomial_logderiv(self, e) -> Series:
        """``d(t^e)/t^e``."""
        if isinstance(e, Exponent):
            return self.dspec.monomial_logderiv(e)
        key = e.normal_form()
        out = self._ld_cache.get(key)
        if out is None:
            out = self.derive(e.payload)
            self._ld_cache[key] = out
        return out

    def derivative_bound(self, beta, hint: int):
        if isinstance(beta, Exponent):
            return self.dspec.derivative_bound(beta, hint)
        return beta + self.monomial_logderiv(beta).leading()[0]

    def derive(self, a: Series) -> Series:
        acc: dict = {}
        for e, c in a.terms:
            if isinstance(e, Exponent) and e.is_zero:
                continue
            for f, q in self.monomial_logderiv(e).terms:
                g = e + f
                acc[g] = acc.get(g, Fraction(0)) + c * q
        prec = None
        if a.precision is not None:
            hint = max([e.max_index() for e, _ in a.terms] + [a.precision.max_index(), 0])
            prec = self.derivative_bound(a.precision, hint)
        return Series._from_dict(acc, a.spine, prec)

    def exp(self, a: Series, max_terms: int | None = None) -> Series:
        n = self.max_terms if max_terms is None else max_terms
        inf, c0, small = a.split()
        e = self.make_exponent(inf) if not inf.is_zero else ZERO
        head = Series.monomial(e, self.hooks.exp_k(c0), a.spine)
        return head * exp_infinitesimal(small, n)

    def log(self, a: Series, max_terms: int | None = None) -> Series:
        n = self.max_terms if max_terms is None else max_terms
        if a.sign() <= 0:
            raise MathError("log of a non-positive series")
        e, c, eps = unit_part(a)
        return self.payload(e) + self.hooks.log_k(c) + log1p_unit(eps, n)

    def _ai_step(self, r: Series) -> Series:
        e, c = r.leading()
        lead = Series.monomial(e, c, r.spine)
        if isinstance(e, Exponent):
            return monomial_ai(lead, self.dspec)
        top = max(e.max_index(), 0)
        cands = [Series.monomial(e, 1, r.spine)]
        cands += [Series.t(i, r.spine) for i in range(top + 3)]
        res = rosenlicht_search(lead, cands, self.derive, self.max_terms)
        if not res.verified:
            raise MathError("no verified asymptotic integral for the leading term")
        f, q = res.value.leading()
        m = Series.monomial(f, q, r.spine)
        if not contract_holds(m, lead, self.derive):
            raise MathError("leading monomial of the asymptotic integral fails the contract")
        return m

    def integrate(self, a: Series, max_iters: int = DEFAULT_MAX_ITERS) -> IntegrationResult:
        return refine(a, self._ai_step, self.derive, max_iters, self.max_terms)


def lift(x: Series, to_level: int, tower: Tower) -> Series:
    return tower.lift(x, to_level)


def exp_el(a: Series, tower: Tower, max_terms: int | None = None) -> Series:
    return tower.exp(a, max_terms)


def log_el(a: Series, tower: Tower, max_terms: int | None = None) -> Series:
    return tower.log(a, max_terms)


def derive_el(a: Series, tower: Tower) -> Series:
    return tower.derive(a)


def integrate_el(a: Series, tower: Tower, max_iters: int = DEFAULT_MAX_ITERS) -> IntegrationResult:
    return tower.integrate(a, max_iters)

