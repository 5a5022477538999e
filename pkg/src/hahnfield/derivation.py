"""Series derivations given by the logarithmic derivatives of the ``t_phi``.

A derivation is fixed by choosing ``d(t_phi)/t_phi`` for every spine index
and extending by the strong Leibniz rule on monomials

    d(t^alpha) = t^alpha * sum_phi alpha_phi * d(t_phi)/t_phi

and strong linearity on series.  Two families are supported: a finite table
over a finite spine, and recurrent monomial families on the natural-number
spine where ``d(t_n)/t_n = c * t^theta_n`` with

    theta_0 = base,  theta_{n+1} = theta_n + shift_n(step).

Both the log-iterate field (``base = 1_0``, ``step = 1_1``) and the plain
right-shift construction (``theta_n = shift_n(b)``) are of this form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ConfigurationError, MathError, PrecisionError
from .hahn_group import ZERO, Exponent, Spine, as_fraction
from .series import DEFAULT_MAX_TERMS, Series, invert


class _NotAttained:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "not-attained"

    __str__ = __repr__


NOT_ATTAINED = _NotAttained()


@dataclass
class HardyReport:
    h3_ok: bool
    hfield_ok: bool
    c1c2_ok: bool
    theta_tilde: object  # Exponent or NOT_ATTAINED
    violations: list = field(default_factory=list)


@dataclass(frozen=True)
class ThetaFamily:
    """``theta_0 = base``, ``theta_{n+1} = theta_n + shift_n(step)`` on the natural numbers."""

    base: Exponent
    step: Exponent

    @classmethod
    def shifted(cls, b: Exponent) -> ThetaFamily:
        """The family ``theta_n = shift_n(b)``."""
        return cls(b, b.shift(1) - b)

    def theta(self, n: int) -> Exponent:
        out = self.base
        for j in range(n):
            out = out + self.step.shift(j)
        return out

    def step_sum(self) -> Fraction:
        return sum((c for _, c in self.step.items), Fraction(0))

    def limit_coeff(self, i: int) -> Fraction:
        """Coefficient at index i of ``lim theta_n`` (well defined once n >= i)."""
        return self.base[i] + sum((c for j, c in self.step.items if j <= i), Fraction(0))

    def limit(self) -> Exponent | None:
        """The limit as an exponent, or None when its support is infinite."""
        if self.step_sum() != 0:
            return None
        top = max(self.base.max_index(), self.step.max_index())
        return Exponent((i, self.limit_coeff(i)) for i in range(top + 1))

    def is_shift_form(self) -> bool:
        return self.step == self.base.shift(1) - self.base

    def h3_symbolic(self) -> bool:
        # telescoping: H3 on every pair reduces to the consecutive step
        return self.step.sign() > 0 and self.step.v_gamma() >= 1


class DerivationSpec:
    """Common interface; see :class:`TableDerivation` and :class:`RecurrentDerivation`."""

    spine: Spine
    family: str

    def __init__(self):
        self._report = None
        self._mono_cache: dict = {}

    def logderiv(self, i: int) -> Series:
        raise NotImplementedError

    def theta(self, i: int) -> Exponent:
        """``v(d(t_i)/t_i)``, recomputed from the stored value."""
        return self.logderiv(i).leading()[0]

    def lead_coeff(self, i: int) -> Fraction:
        return self.logderiv(i).leading()[1]

    @property
    def report(self) -> HardyReport:
        if self._report is None:
            self._report = validate_hardy(self)
        return self._report

    @property
    def theta_tilde(self):
        return self.report.theta_tilde

    def psi(self, alpha: Exponent):
        raise NotImplementedError

    def monomial_logderiv(self, alpha: Exponent) -> Series:
        """``d(t^alpha)/t^alpha = sum_phi alpha_phi d(t_phi)/t_phi`` (exact)."""
        out = self._mono_cache.get(alpha)
        if out is None:
            out = Series.zero(self.spine)
            for i, q in alpha.items:
                out = out + self.logderiv(i).scale(q)
            self._mono_cache[alpha] = out
        return out

    def derivative_bound(self, beta, hint: int = 0):
        """Lower bound for ``v(d(b))`` over all b with ``v(b) >= beta``."""
        if self.report.h3_ok:
            if beta == ZERO:
                return self._tail_bound(hint)
            return beta + self.theta(beta.v_gamma())
        if self.spine.is_finite:
            return beta + min(self.theta(i) for i in self.spine)
        raise PrecisionError("cannot bound the derivative of a truncated tail "
                             "for a non-Hardy family on the natural numbers")

    def _tail_bound(self, hint: int):
        raise NotImplementedError


class TableDerivation(DerivationSpec):
    family = "finite-table"

    def __init__(self, spine: Spine, table: Mapping[int, Series]):
        super().__init__()
        if not spine.is_finite:
            raise ConfigurationError("a finite table needs a finite spine")
        self.spine = spine
        missing = [i for i in spine if i not in table]
        if missing:
            raise ConfigurationError(f"no logarithmic derivative for indices {missing}")
        self.table = {}
        for i in spine:
            s = table[i]
            if s.spine != spine:
                raise ConfigurationError(f"logarithmic derivative of t{i} is on another spine")
            if not s.exact or s.is_zero:
                raise ConfigurationError(f"d(t{i})/t{i} must be an exact nonzero series")
            self.table[i] = s

    def logderiv(self, i: int) -> Series:
        try:
            return self.table[i]
        except KeyError:
            raise ConfigurationError(f"index {i} is not on {self.spine!r}") from None

    def psi(self, alpha: Exponent):
        found = [i for i in self.spine if (alpha - self.theta(i)).v_gamma() == i]
        if len(found) > 1:
            raise MathError(f"psi is not unique for {alpha!r}: {found}")
        return found[0] if found else None

    def _tail_bound(self, hint: int):
        return max(self.theta(i) for i in self.spine)


class RecurrentDerivation(DerivationSpec):
    family = "right-shift"

    def __init__(self, thetas: ThetaFamily, coeff=-1, name: str = "recurrent"):
        super().__init__()
        self.spine = Spine.nat()
        self.thetas = thetas
        self.coeff = as_fraction(coeff)
        if self.coeff == 0:
            raise ConfigurationError("logarithmic derivatives must be nonzero")
        self.name = name
        self._cache: dict[int, Series] = {}

    @classmethod
    def logs(cls) -> RecurrentDerivation:
        """``t_n = 1/log_n(x)``: ``d(t_n)/t_n = -t_0 t_1 ... t_n``."""
        return cls(ThetaFamily(Exponent.unit(0), Exponent.unit(1)), -1, name="logs")

    @classmethod
    def right_shift(cls, coefficients, coeff=-1) -> RecurrentDerivation:
        """``d(t_n)/t_n = coeff * prod_k t_{n+k}^{coefficients[k-1]}``."""
        b = Exponent((k + 1, q) for k, q in enumerate(coefficients))
        return cls(ThetaFamily.shifted(b), coeff, name="right-shift")

    def logderiv(self, i: int) -> Series:
        if not isinstance(i, int) or i < 0:
            raise ConfigurationError(f"index {i} is not on the natural-number spine")
        s = self._cache.get(i)
        if s is None:
            s = Series.monomial(self.thetas.theta(i), self.coeff, self.spine)
            self._cache[i] = s
        return s

    def theta(self, i: int) -> Exponent:
        return self.logderiv(i).terms[0][0]

    def lead_coeff(self, i: int) -> Fraction:
        return self.coeff

    def psi(self, alpha: Exponent):
        fam = self.thetas
        top = max(alpha.max_index(), fam.base.max_index(), fam.step.max_index()) + 1
        for i in range(top + 1):
            if alpha[i] != fam.limit_coeff(i):
                if (alpha - self.theta(i)).v_gamma() != i:
                    raise MathError(f"psi search failed for {alpha!r}")
                return i
        return None

    def _tail_bound(self, hint: int):
        lim = self.thetas.limit()
        if lim is not None:
            return lim
        return self.theta(hint + 1)


def check_right_shift_family(spine: Spine, c, theta: ThetaFamily) -> bool:
    """Sufficient condition for a Hardy-type series derivation on the natural numbers.

    True when ``supp(theta_n)`` lies in ``{n+1, n+2, ...}`` with a negative
    coefficient at ``n+1``, or when (H3) holds for the family symbolically.
    """
    if spine.is_finite:
        raise ConfigurationError("right-shift families live on the natural-number spine")
    coeff = c(0) if callable(c) else as_fraction(c)
    if coeff == 0:
        return False
    shift_ok = (theta.is_shift_form() and theta.base.v_gamma() >= 1
                and theta.base[1] < 0)
    return shift_ok or theta.h3_symbolic()


def _pair_violation(spec: DerivationSpec, i: int, j: int):
    ti, tj = spec.theta(i), spec.theta(j)
    if not ti < tj:
        return (i, j), "theta not increasing"
    if not (ti - tj).v_gamma() > i:
        return (i, j), "v_gamma(theta_i - theta_j) does not exceed i"
    return None


def validate_hardy(spec: DerivationSpec) -> HardyReport:
    """Check (H3), the H-field sign condition and summability for a derivation."""
    violations = []
    if isinstance(spec, TableDerivation):
        idx = list(spec.spine)
        for a, i in enumerate(idx):
            for j in idx[a + 1:]:
                v = _pair_violation(spec, i, j)
                if v:
                    violations.append(v)
        h3 = not violations
        hfield = True
        for i in idx:
            if spec.lead_coeff(i) >= 0:
                hfield = False
                violations.append(((i,), "leading coefficient is not negative"))
        tilde = max(spec.theta(i) for i in idx)
        return HardyReport(h3, hfield, True, tilde, violations)

    if isinstance(spec, RecurrentDerivation):
        fam = spec.thetas
        h3 = fam.h3_symbolic()
        # concrete witnesses (and a sanity check of the telescoping argument)
        for i in range(8):
            for j in range(i + 1, 9):
                v = _pair_violation(spec, i, j)
                if v:
                    violations.append(v)
        if h3 and violations:
            raise MathError("symbolic (H3) check disagrees with enumeration")
        hfield = spec.coeff < 0
        if not hfield:
            violations.append((("n",), "leading coefficient is not negative"))
        c1c2 = check_right_shift_family(spec.spine, spec.coeff, fam)
        if fam.step.sign() < 0:
            tilde = fam.base
        else:
            lim = fam.limit()
            tilde = NOT_ATTAINED if lim is None else lim
        return HardyReport(h3, hfield, c1c2, tilde, violations)

    raise ConfigurationError(f"unsupported derivation family {type(spec).__name__}")


def derive(a: Series, spec: DerivationSpec) -> Series:
    """Strongly linear extension of the strong Leibniz rule."""
    if a.spine != spec.spine:
        raise ConfigurationError("series and derivation live on different spines")
    acc: dict = {}
    for alpha, c in a.terms:
        if alpha.is_zero:
            continue
        for beta, q in spec.monomial_logderiv(alpha).terms:
            e = alpha + beta
            acc[e] = acc.get(e, Fraction(0)) + c * q
    prec = None
    if a.precision is not None:
        hint = max((e.max_index() for e, _ in a.terms), default=0)
        hint = max(hint, a.precision.max_index())
        prec = spec.derivative_bound(a.precision, hint)
    return Series._from_dict(acc, a.spine, prec)


def log_derivative(a: Series, spec: DerivationSpec, max_terms: int = DEFAULT_MAX_TERMS) -> Series:
    """``d(a)/a``; exact for monomials."""
    if a.is_zero:
        raise MathError("logarithmic derivative of zero")
    if a.is_monomial:
        return spec.monomial_logderiv(a.terms[0][0])
    return derive(a, spec) * invert(a, max_terms)

