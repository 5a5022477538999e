"""Exponents of generalized series: elements of a Hahn group over a spine.

An exponent is a finitely supported map from spine indices to rationals,
written ``sum_phi alpha_phi 1_phi``.  The group law is componentwise and the
order is lexicographic: the sign of ``a - b`` is the sign of its coefficient
at the smallest index of its support.

Two spine families are supported:

* finite spines, given as a strictly increasing tuple of integer labels
  (``Spine.finite((1, 2, 3))``);
* the lazy spine of natural numbers with the right shift ``n -> n + 1``
  (``Spine.nat()``).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import ConfigurationError, ParseError

INFINITY = math.inf


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Spine:
    """Ordered set of Archimedean classes, with integer labels."""

    __slots__ = ("indices", "_set")

    def __init__(self, indices: Iterable[int] | None = None):
        if indices is None:
            self.indices = None
            self._set = None
            return
        idx = tuple(int(i) for i in indices)
        if not idx:
            raise ConfigurationError("a finite spine needs at least one index")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ConfigurationError(f"finite spine must be strictly increasing: {idx}")
        self.indices = idx
        self._set = frozenset(idx)

    @classmethod
    def nat(cls) -> Spine:
        return cls(None)

    @classmethod
    def finite(cls, indices: Iterable[int]) -> Spine:
        return cls(indices)

    @property
    def is_finite(self) -> bool:
        return self.indices is not None

    def __contains__(self, i) -> bool:
        if self.indices is None:
            return isinstance(i, int) and i >= 0
        return i in self._set

    def __iter__(self) -> Iterator[int]:
        if self.indices is None:
            raise ConfigurationError("cannot enumerate the lazy natural-number spine")
        return iter(self.indices)

    def __len__(self) -> int:
        if self.indices is None:
            raise ConfigurationError("the natural-number spine is infinite")
        return len(self.indices)

    def shift(self, i: int) -> int:
        """The right shift sigma(n) = n + 1 (natural-number spine only)."""
        if self.indices is not None:
            raise ConfigurationError("finite spines carry no right shift")
        return i + 1

    def check(self, e: Exponent) -> Exponent:
        for i, _ in e.items:
            if i not in self:
                raise ConfigurationError(f"index {i} is not on spine {self!r}")
        return e

    def __eq__(self, other) -> bool:
        return isinstance(other, Spine) and self.indices == other.indices

    def __hash__(self) -> int:
        return hash(("Spine", self.indices))

    def __repr__(self) -> str:
        if self.indices is None:
            return "Spine.nat()"
        return f"Spine.finite({self.indices})"


def _cmp_items(a, b) -> int:
    i = j = 0
    la, lb = len(a), len(b)
    while i < la or j < lb:
        if j >= lb or (i < la and a[i][0] < b[j][0]):
            return 1 if a[i][1] > 0 else -1
        if i >= la or b[j][0] < a[i][0]:
            return -1 if b[j][1] > 0 else 1
        ca, cb = a[i][1], b[j][1]
        if ca != cb:
            return 1 if ca > cb else -1
        i += 1
        j += 1
    return 0


class Exponent:
    """Immutable, finitely supported map ``index -> nonzero rational``."""

    __slots__ = ("items", "_hash")

    level = 0

    def __init__(self, mapping: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        if isinstance(mapping, Mapping):
            pairs = mapping.items()
        else:
            pairs = mapping
        acc: dict[int, Fraction] = {}
        for i, c in pairs:
            i = int(i)
            if i < 0:
                raise ConfigurationError(f"negative spine index {i}")
            acc[i] = acc.get(i, Fraction(0)) + as_fraction(c)
        self.items = tuple((i, acc[i]) for i in sorted(acc) if acc[i] != 0)
        self._hash = None

    @classmethod
    def _raw(cls, items: tuple) -> Exponent:
        e = object.__new__(cls)
        e.items = items
        e._hash = None
        return e

    @classmethod
    def unit(cls, i: int, c=1) -> Exponent:
        """The exponent ``c * 1_i``."""
        return cls({i: c})

    @classmethod
    def from_tuple(cls, values: Iterable, spine: Spine) -> Exponent:
        values = list(values)
        if not spine.is_finite or len(values) != len(spine):
            raise ConfigurationError(f"tuple {values} does not match {spine!r}")
        return cls(zip(spine.indices, values))

    # -- inspection -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.items)

    @property
    def is_zero(self) -> bool:
        return not self.items

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def __getitem__(self, i: int) -> Fraction:
        for j, c in self.items:
            if j == i:
                return c
            if j > i:
                break
        return Fraction(0)

    def v_gamma(self):
        """Natural valuation: least index of the support, infinity for 0."""
        return self.items[0][0] if self.items else INFINITY

    def sign(self) -> int:
        if not self.items:
            return 0
        return 1 if self.items[0][1] > 0 else -1

    def max_index(self) -> int:
        return self.items[-1][0] if self.items else -1

    def shift(self, n: int) -> Exponent:
        return Exponent._raw(tuple((i + n, c) for i, c in self.items))

    # -- group law ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        if not self.items:
            return other
        if not other.items:
            return self
        a, b = self.items, other.items
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i][0] < b[j][0]:
                out.append(a[i])
                i += 1
            elif b[j][0] < a[i][0]:
                out.append(b[j])
                j += 1
            else:
                c = a[i][1] + b[j][1]
                if c:
                    out.append((a[i][0], c))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Exponent._raw(tuple(out))

    def __neg__(self) -> Exponent:
        return Exponent._raw(tuple((i, -c) for i, c in self.items))

    def __sub__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, q):
        if isinstance(q, (Exponent,)) or not isinstance(q, (int, Fraction)):
            return NotImplemented
        q = Fraction(q)
        if q == 0:
            return ZERO
        return Exponent._raw(tuple((i, c * q) for i, c in self.items))

    __rmul__ = __mul__

    def __abs__(self) -> Exponent:
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------------

    def cmp(self, other: Exponent) -> int:
        return _cmp_items(self.items, other.items)

    def __lt__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return _cmp_items(self.items, other.items) < 0

    def __le__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return _cmp_items(self.items, other.items) <= 0

    def __gt__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return _cmp_items(self.items, other.items) > 0

    def __ge__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return _cmp_items(self.items, other.items) >= 0

    def __eq__(self, other):
        if isinstance(other, Exponent):
            return self.items == other.items
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.items)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {format_rational(c)}" for i, c in self.items)
        return f"Exponent({{{body}}})"


ZERO = Exponent()


def compare_exponents(a: Exponent, b: Exponent, spine: Spine | None = None) -> int:
    """Lexicographic comparison; returns -1, 0 or 1."""
    if spine is not None:
        spine.check(a)
        spine.check(b)
    return a.cmp(b)


def v_gamma(a: Exponent):
    return a.v_gamma()


def archimedean_equiv(a: Exponent, b: Exponent) -> bool:
    """True iff ``n|a| >= |b|`` and ``n|b| >= |a|`` for some integer n.

    For Hahn-group elements this is the same as having equal natural valuation.
    """
    return a.v_gamma() == b.v_gamma()


# -- text forms -----------------------------------------------------------------

def format_exponent(e: Exponent, spine: Spine) -> str:
    """``(1,0,-1/2)`` over a finite spine, ``{0:1, 3:-2}`` over the natural numbers."""
    if spine.is_finite:
        return "(" + ",".join(format_rational(e[i]) for i in spine.indices) + ")"
    return "{" + ", ".join(f"{i}:{format_rational(c)}" for i, c in e.items) + "}"


_RAT = r"[+-]?\s*\d+(?:\s*/\s*\d+)?"
_TUPLE_RE = re.compile(rf"^\(\s*(?:{_RAT})(?:\s*,\s*{_RAT})*\s*\)$")
_MAP_RE = re.compile(rf"^\{{\s*(?:\d+\s*:\s*{_RAT}(?:\s*,\s*\d+\s*:\s*{_RAT})*)?\s*\}}$")


def _rat(text: str) -> Fraction:
    return Fraction(text.replace(" ", ""))


def parse_exponent(text: str, spine: Spine | None = None) -> Exponent:
    """Parse either exponent form; tuples require a finite spine."""
    s = text.strip()
    if _TUPLE_RE.match(s):
        if spine is None or not spine.is_finite:
            raise ParseError("tuple exponents need a finite spine", text, 0)
        parts = [_rat(p) for p in s[1:-1].split(",")]
        if len(parts) != len(spine):
            raise ParseError(
                f"tuple has {len(parts)} entries, spine has {len(spine)}", text, 0)
        return Exponent(zip(spine.indices, parts))
    if _MAP_RE.match(s):
        inner = s[1:-1].strip()
        pairs = []
        if inner:
            for chunk in inner.split(","):
                k, v = chunk.split(":")
                pairs.append((int(k), _rat(v)))
        e = Exponent(pairs)
        if spine is not None:
            try:
                spine.check(e)
            except ConfigurationError as exc:
                raise ParseError(str(exc), text, 0) from None
        return e
    raise ParseError("malformed exponent", text, 0)
