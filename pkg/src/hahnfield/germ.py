"""Numeric reading of series as germs of real functions at +infinity.

Each spine index is assigned a germ kind:

* ``exp(k)``:  ``t = 1/exp_k(x)`` (``exp_1(x) = e^x``),
* ``power``:   ``t = 1/x``,
* ``log(k)``:  ``t = 1/log_k(x)`` (``log_1(x) = log x``).

A monomial is evaluated through its logarithm,
``c * exp(sum_phi alpha_phi * log t_phi(x))``, which avoids overflow of the
individual factors.  Tower monomials ``t^e`` evaluate to ``exp(log(t^e))``
with the logarithm evaluated recursively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import ConfigurationError, DomainError
from .hahn_group import Exponent, Spine
from .series import Series

_NAT_CHECK = 16


@dataclass(frozen=True)
class GermKind:
    kind: str  # "exp" | "power" | "log"
    k: int = 0

    def rank(self) -> tuple:
        """Sort key: faster-growing reciprocals first."""
        if self.kind == "exp":
            return (0, -self.k)
        if self.kind == "power":
            return (1, 0)
        return (2, self.k)

    def __str__(self) -> str:
        return self.kind if self.kind == "power" else f"{self.kind}({self.k})"


def parse_germ_kind(text: str) -> GermKind:
    s = text.strip().replace(" ", "")
    if s == "power":
        return GermKind("power")
    for kind in ("exp", "log"):
        if s.startswith(kind + "(") and s.endswith(")"):
            try:
                k = int(s[len(kind) + 1:-1])
            except ValueError:
                break
            if k >= 1:
                return GermKind(kind, k)
    raise ConfigurationError(f"unknown germ kind {text!r}")


class GermMap:
    """Germ kind per spine index (a table, or a rule on the natural numbers)."""

    def __init__(self, spine: Spine, kinds: Mapping[int, GermKind] | Callable[[int], GermKind]):
        self.spine = spine
        self._fn = kinds if callable(kinds) else None
        self._table = None if callable(kinds) else dict(kinds)
        idx = list(spine) if spine.is_finite else list(range(_NAT_CHECK))
        ranks = [self.kind(i).rank() for i in idx]
        if any(b <= a for a, b in zip(ranks, ranks[1:])):
            raise ConfigurationError("germ kinds are not ordered consistently with the spine")

    def kind(self, i: int) -> GermKind:
        if self._fn is not None:
            return self._fn(i)
        try:
            return self._table[i]
        except KeyError:
            raise ConfigurationError(f"no germ for t{i}") from None

    def log_t(self, i: int, x: float) -> float:
        """``log t_i(x)``."""
        g = self.kind(i)
        try:
            if g.kind == "exp":
                y = x
                for _ in range(g.k - 1):
                    y = math.exp(y)
                return -y
            if g.kind == "power":
                if x <= 0:
                    raise DomainError(f"1/x undefined at x = {x}")
                return -math.log(x)
            y = x
            for _ in range(g.k):
                if y <= 0:
                    raise DomainError(f"log iterate undefined at x = {x}")
                y = math.log(y)
            if y <= 0:
                raise DomainError(f"1/log_{g.k}(x) undefined at x = {x}")
            return -math.log(y)
        except OverflowError:
            raise DomainError(f"overflow evaluating t{i} at x = {x}") from None


def leh3_germs() -> GermMap:
    return GermMap(Spine.finite((1, 2, 3)),
                   {1: GermKind("exp", 1), 2: GermKind("power"), 3: GermKind("log", 1)})


def logs_germs() -> GermMap:
    return GermMap(Spine.nat(), lambda n: GermKind("power") if n == 0 else GermKind("log", n))


def log_monomial_value(e, x: float, germs: GermMap) -> float:
    """``log(t^e)`` at x."""
    if isinstance(e, Exponent):
        return sum(float(q) * germs.log_t(i, x) for i, q in e.items)
    return eval_series(e.payload, x, germs)


def eval_series(a: Series, x: float, germs: GermMap) -> float:
    """Value of the stored terms of ``a`` at x (the unknown tail is ignored)."""
    total = 0.0
    for e, c in a.terms:
        lv = log_monomial_value(e, x, germs)
        try:
            total += float(c) * math.exp(lv)
        except OverflowError:
            raise DomainError(f"overflow evaluating a monomial at x = {x}") from None
    return total


def default_step(x: float) -> float:
    return abs(x) * 1e-6


def numeric_derivative_check(a: Series, x: float, germs: GermMap,
                             derive: Callable[[Series], Series],
                             h: float | None = None) -> dict:
    """Compare ``eval(d(a))`` with a central difference of ``eval(a)``."""
    if h is None:
        h = default_step(x)
    symbolic = eval_series(derive(a), x, germs)
    numeric = (eval_series(a, x + h, germs) - eval_series(a, x - h, germs)) / (2 * h)
    scale = abs(symbolic)
    rel = abs(symbolic - numeric) / scale if scale > 0 else abs(numeric)
    return {"symbolic": symbolic, "numeric": numeric, "rel_err": rel}
