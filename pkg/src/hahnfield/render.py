"""Text and JSON renderings of exponents and series.

Text form lists terms in ascending exponent order, e.g.
``1 - 1/2*t2^2 + t1*t2^-1``; a truncated series ends in ``+ O(t^...)``.
Tower exponents render with explicit braces: ``t^{t1^-1}``.
"""

from __future__ import annotations

from fractions import Fraction

from .hahn_group import Exponent, Spine, format_exponent, format_rational
from .series import Series


def render_monomial(e) -> str:
    """Monomial ``t^e`` with coefficient 1; ``1`` for the zero exponent."""
    if not isinstance(e, Exponent):
        return "t^{" + render_series(e.payload) + "}"
    if e.is_zero:
        return "1"
    parts = []
    for i, c in e.items:
        if c == 1:
            parts.append(f"t{i}")
        elif c.denominator == 1:
            parts.append(f"t{i}^{c.numerator}")
        else:
            parts.append(f"t{i}^{{{format_rational(c)}}}")
    return "*".join(parts)


def _term(e, c: Fraction) -> str:
    a = abs(c)
    if isinstance(e, Exponent) and e.is_zero:
        return format_rational(a)
    mono = render_monomial(e)
    if a == 1:
        return mono
    return f"{format_rational(a)}*{mono}"


def render_series(s: Series) -> str:
    out = ""
    for k, (e, c) in enumerate(s.terms):
        body = _term(e, c)
        if k == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    if s.precision is not None:
        tail = f"O({render_monomial(s.precision)})"
        out = tail if not out else out + " + " + tail
    return out or "0"


def _json_rational(q: Fraction):
    return q.numerator if q.denominator == 1 else format_rational(q)


def exponent_to_json(e, spine: Spine):
    if not isinstance(e, Exponent):
        return {"level": e.level, "terms": series_to_json(e.payload)["terms"]}
    if spine.is_finite:
        return [_json_rational(e[i]) for i in spine.indices]
    return {str(i): _json_rational(c) for i, c in e.items}


def series_to_json(s: Series) -> dict:
    return {
        "level": s.level,
        "terms": [
            {"exponent": exponent_to_json(e, s.spine),
             "numerator": c.numerator,
             "denominator": c.denominator}
            for e, c in s.terms
        ],
        "exact": s.exact,
        "precision": None if s.precision is None else exponent_to_json(s.precision, s.spine),
    }


def render_exponent(e, spine: Spine) -> str:
    if isinstance(e, Exponent):
        return format_exponent(e, spine)
    return "{" + render_series(e.payload) + "}"
