"""Generalized series with finitely many stored terms.

A :class:`Series` is a finite, strictly ascending list of ``(exponent,
coefficient)`` pairs plus an optional *precision*: an exponent below which
every term is known.  ``precision is None`` means the value is exact; a
truncated value stands for ``sum of terms + O(t^precision)``.  Every
operation that can produce an infinite result (inversion, the 1-unit
logarithm, the infinitesimal exponential) takes a ``max_terms`` budget and
records the truncation in the precision, which then propagates through
later arithmetic.

Exponents are :class:`~hahnfield.hahn_group.Exponent` objects, or the
leveled exponents of the exponential tower; the arithmetic below only uses
their group law and order, so it serves both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import ConfigurationError, HookUndefined, MathError, PrecisionError
from .hahn_group import ZERO, Exponent, Spine, as_fraction

DEFAULT_MAX_TERMS = 32


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a < b else b


class Series:
    __slots__ = ("terms", "spine", "precision", "_hash")

    def __init__(self, terms: Iterable[tuple[object, object]] = (), spine: Spine | None = None,
                 precision=None):
        if spine is None:
            raise ConfigurationError("a series needs a spine")
        acc: dict = {}
        for e, c in terms:
            acc[e] = acc.get(e, Fraction(0)) + as_fraction(c)
        self._init_from(acc, spine, precision)

    def _init_from(self, acc: dict, spine: Spine, precision) -> None:
        if precision is None:
            keys = [e for e, c in acc.items() if c != 0]
        else:
            keys = [e for e, c in acc.items() if c != 0 and e < precision]
        keys.sort()
        self.terms = tuple((e, acc[e]) for e in keys)
        self.spine = spine
        self.precision = precision
        self._hash = None

    @classmethod
    def _from_dict(cls, acc: dict, spine: Spine, precision=None) -> Series:
        s = object.__new__(cls)
        s._init_from(acc, spine, precision)
        return s

    @classmethod
    def _raw(cls, terms: tuple, spine: Spine, precision=None) -> Series:
        s = object.__new__(cls)
        s.terms = terms
        s.spine = spine
        s.precision = precision
        s._hash = None
        return s

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, spine: Spine) -> Series:
        return cls._raw((), spine)

    @classmethod
    def const(cls, c, spine: Spine) -> Series:
        c = as_fraction(c)
        return cls._raw(((ZERO, c),) if c else (), spine)

    @classmethod
    def monomial(cls, exponent, coeff=1, spine: Spine | None = None) -> Series:
        if spine is None:
            raise ConfigurationError("a series needs a spine")
        if isinstance(exponent, Exponent):
            spine.check(exponent)
        c = as_fraction(coeff)
        return cls._raw(((exponent, c),) if c else (), spine)

    @classmethod
    def t(cls, i: int, spine: Spine, power=1) -> Series:
        """The fundamental monomial ``t_i ** power``."""
        return cls.monomial(Exponent.unit(i, power), 1, spine)

    @classmethod
    def big_o(cls, exponent, spine: Spine) -> Series:
        """The unknown tail ``O(t^exponent)``."""
        return cls._raw((), spine, exponent)

    # -- inspection -------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.precision is None

    @property
    def is_zero(self) -> bool:
        """Exactly zero (no terms, no unknown tail)."""
        return not self.terms and self.precision is None

    def __bool__(self) -> bool:
        return not self.is_zero

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def level(self) -> int:
        return max((e.level for e, _ in self.terms), default=0)

    def coefficient(self, e) -> Fraction:
        for f, c in self.terms:
            if f == e:
                return c
        return Fraction(0)

    def low(self):
        """A lower bound for the valuation: the first exponent, else the precision."""
        if self.terms:
            return self.terms[0][0]
        return self.precision

    def leading(self) -> tuple:
        """``(v(a), leading coefficient)``."""
        if self.terms:
            return self.terms[0]
        if self.precision is None:
            raise MathError("the zero series has no leading term")
        raise PrecisionError("no term of the series is known below its precision")

    def valuation(self):
        """Canonical valuation; ``math.inf`` for the exact zero series."""
        if self.is_zero:
            return math.inf
        return self.leading()[0]

    @property
    def is_constant(self) -> bool:
        return self.exact and all(e == ZERO for e, _ in self.terms)

    @property
    def is_monomial(self) -> bool:
        return self.exact and len(self.terms) == 1

    def constant_term(self) -> Fraction:
        return self.coefficient(ZERO)

    def sign(self) -> int:
        if self.is_zero:
            return 0
        return 1 if self.leading()[1] > 0 else -1

    # -- structural helpers ----------------------------------------------------

    def with_precision(self, p) -> Series:
        """Forget everything at or above ``p``."""
        if p is None:
            return self
        q = _min_prec(self.precision, p)
        if q is self.precision and (not self.terms or self.terms[-1][0] < q):
            return self
        return Series._raw(tuple(t for t in self.terms if t[0] < q), self.spine, q)

    def truncate(self, max_terms: int) -> Series:
        """Keep the first ``max_terms`` terms; the first dropped exponent becomes the precision."""
        if len(self.terms) <= max_terms:
            return self
        cut = self.terms[max_terms][0]
        return Series._raw(self.terms[:max_terms], self.spine, _min_prec(self.precision, cut))

    def head(self, n: int) -> tuple:
        return self.terms[:n]

    def agrees(self, other: Series) -> bool:
        """Equal on every term below both precisions."""
        self._check_spine(other)
        p = _min_prec(self.precision, other.precision)
        a = [t for t in self.terms if p is None or t[0] < p]
        b = [t for t in other.terms if p is None or t[0] < p]
        return a == b

    def split(self) -> tuple[Series, Fraction, Series]:
        """``(purely infinite part, constant term, infinitesimal part)``."""
        inf, small = [], []
        c = Fraction(0)
        for e, a in self.terms:
            if e == ZERO:
                c = a
            elif e < ZERO:
                inf.append((e, a))
            else:
                small.append((e, a))
        if self.precision is not None and not ZERO < self.precision:
            raise PrecisionError("the infinite part of the series is not fully known")
        return (Series._raw(tuple(inf), self.spine),
                c,
                Series._raw(tuple(small), self.spine, self.precision))

    def map_exponents(self, fn: Callable, precision_fn: Callable | None = None) -> Series:
        acc: dict = {}
        for e, c in self.terms:
            f = fn(e)
            acc[f] = acc.get(f, Fraction(0)) + c
        p = self.precision
        if p is not None:
            p = (precision_fn or fn)(p)
        return Series._from_dict(acc, self.spine, p)

    # -- arithmetic ----------------------------------------------------------

    def _check_spine(self, other: Series) -> None:
        if self.spine != other.spine:
            raise ConfigurationError(f"spine mismatch: {self.spine!r} vs {other.spine!r}")

    def _coerce(self, other) -> Series | None:
        if isinstance(other, Series):
            self._check_spine(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Series.const(other, self.spine)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return Series._from_dict(acc, self.spine, _min_prec(self.precision, other.precision))

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series._raw(tuple((e, -c) for e, c in self.terms), self.spine, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, q) -> Series:
        q = as_fraction(q)
        if q == 0:
            return Series.zero(self.spine)
        return Series._raw(tuple((e, c * q) for e, c in self.terms), self.spine, self.precision)

    def mul_monomial(self, exponent, coeff=1) -> Series:
        """Multiply by ``coeff * t^exponent`` (order preserving, so no re-sort)."""
        coeff = as_fraction(coeff)
        if coeff == 0:
            return Series.zero(self.spine)
        p = None if self.precision is None else self.precision + exponent
        return Series._raw(tuple((e + exponent, c * coeff) for e, c in self.terms),
                           self.spine, p)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Series.zero(self.spine)
        prec = None
        if self.precision is not None:
            prec = self.precision + other.low()
        if other.precision is not None:
            prec = _min_prec(prec, other.precision + self.low())
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if prec is not None and not e < prec:
                    continue
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return Series._from_dict(acc, self.spine, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Series:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert(self) ** (-n)
        result = Series.const(1, self.spine)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * invert(other)

    # -- order and equality ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.const(other, self.spine)
        if not isinstance(other, Series):
            return NotImplemented
        return (self.spine == other.spine and self.terms == other.terms
                and self.precision == other.precision)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.terms, self.spine, self.precision))
        return self._hash

    def __lt__(self, other):
        return compare_series(self, other) < 0

    def __le__(self, other):
        return compare_series(self, other) <= 0

    def __gt__(self, other):
        return compare_series(self, other) > 0

    def __ge__(self, other):
        return compare_series(self, other) >= 0

    def __repr__(self) -> str:
        from .render import render_series
        return f"Series({render_series(self)!r})"


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series) -> Series:
    return a * b


def leading(a: Series) -> tuple:
    return a.leading()


def compare_series(a, b) -> int:
    """Sign of ``a - b`` under the lexicographic field order."""
    if isinstance(a, Series) and not isinstance(b, Series):
        b = Series.const(b, a.spine)
    elif isinstance(b, Series) and not isinstance(a, Series):
        a = Series.const(a, b.spine)
    # walk both term lists until the first difference instead of forming a - b
    prec = _min_prec(a.precision, b.precision)
    ta, tb = a.terms, b.terms
    i = j = 0
    while i < len(ta) or j < len(tb):
        if j >= len(tb) or (i < len(ta) and ta[i][0] < tb[j][0]):
            e, c = ta[i]
            i += 1
        elif i >= len(ta) or tb[j][0] < ta[i][0]:
            e, c = tb[j][0], -tb[j][1]
            j += 1
        else:
            e, c = ta[i][0], ta[i][1] - tb[j][1]
            i += 1
            j += 1
        if prec is not None and not e < prec:
            return 0
        if c != 0:
            return 1 if c > 0 else -1
    return 0


def invert(a: Series, max_terms: int = DEFAULT_MAX_TERMS) -> Series:
    """``1/a`` by the geometric expansion of its unit part.

    Writing ``a = c t^alpha (1 - eps)`` with ``v(eps) > 0``, the result is
    ``c^-1 t^-alpha sum_{n < max_terms} eps^n``, cut at valuation
    ``max_terms * v(eps)`` (everything below that bound is exact).
    """
    if a.is_zero:
        raise MathError("division by zero")
    alpha, c = a.leading()
    inv_c = 1 / c
    eps = -(a.mul_monomial(-alpha, inv_c) - 1)
    if eps.is_zero:
        return Series.monomial(-alpha, inv_c, a.spine)
    bound = max_terms * eps.low()
    total = Series.const(1, a.spine)
    power = total
    for _ in range(1, max_terms):
        power = (power * eps).with_precision(bound).truncate(max_terms)
        if not power.terms:
            total = total + power
            break
        total = total + power
    total = total.with_precision(bound).with_precision(eps.precision).truncate(max_terms)
    return total.mul_monomial(-alpha, inv_c)


@dataclass(frozen=True)
class CoefficientHooks:
    """Partial logarithm/exponential on the coefficient field plus a float embedding."""

    name: str
    log_k: Callable[[Fraction], Fraction]
    exp_k: Callable[[Fraction], Fraction]
    numeric: Callable[[Fraction], float] = float


def _rational_log(c: Fraction) -> Fraction:
    if c == 1:
        return Fraction(0)
    raise HookUndefined(f"log_k({c}) is not rational")


def _rational_exp(c: Fraction) -> Fraction:
    if c == 0:
        return Fraction(1)
    raise HookUndefined(f"exp_k({c}) is not rational")


def _float_log(c: Fraction) -> Fraction:
    if c <= 0:
        raise HookUndefined(f"log_k({c}) undefined for non-positive values")
    if c == 1:
        return Fraction(0)
    return Fraction(math.log(c))


def _float_exp(c: Fraction) -> Fraction:
    if c == 0:
        return Fraction(1)
    return Fraction(math.exp(c))


RATIONAL_HOOKS = CoefficientHooks("rational", _rational_log, _rational_exp)
FLOAT_HOOKS = CoefficientHooks("float", _float_log, _float_exp)
