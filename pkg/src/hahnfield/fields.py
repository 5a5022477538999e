"""Field configurations: spine, derivation, pre-log, germs and coefficient hooks.

Fields are described in INI files::

    [spine]        kind = finite, indices = 1, 2, 3    |  kind = nat
    [logderiv]     kind = table with one entry per index, e.g. ``2 = -t2``
                   | kind = logs
                   | kind = right-shift, coefficients = -1, 0, 2, coeff = -1
                   | kind = recurrent, base = {0:1}, step = {1:1}, coeff = -1
    [prelog]       kind = from-derivation | sigma-shift (sign = -1) | table | none
    [germs]        one entry per index (``exp(1)``, ``power``, ``log(2)``)
                   | kind = logs | kind = none
    [coefficients] hooks = rational | float

Two fields ship with the package: ``leh3`` and ``logs``.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import parser as ast
from .derivation import (
    DerivationSpec, RecurrentDerivation, TableDerivation, ThetaFamily, derive,
    log_derivative,
)
from .el_tower import Tower
from .errors import ConfigurationError, MathError
from .germ import GermMap, eval_series, logs_germs, numeric_derivative_check, parse_germ_kind
from .hahn_group import Exponent, Spine, parse_exponent
from .integration import IntegrationResult, integrate, monomial_ai
from .logarithm import (
    DerivedPreLog, PreLogSpec, SigmaShiftPreLog, TablePreLog, exp_series, log_series,
    validate_prelog,
)
from .series import (
    DEFAULT_MAX_TERMS, FLOAT_HOOKS, RATIONAL_HOOKS, CoefficientHooks, Series, invert,
)

BUILTIN = ("leh3", "logs")
ENV_MAX_TERMS = "HAHNFIELD_MAX_TERMS"


def default_max_terms() -> int:
    raw = os.environ.get(ENV_MAX_TERMS)
    if not raw:
        return DEFAULT_MAX_TERMS
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"{ENV_MAX_TERMS} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigurationError(f"{ENV_MAX_TERMS} must be positive")
    return n


@dataclass
class Field:
    name: str
    spine: Spine
    dspec: DerivationSpec
    pspec: PreLogSpec | None
    germs: GermMap | None
    hooks: CoefficientHooks
    max_terms: int = DEFAULT_MAX_TERMS
    depth: int = 3
    _tower: object = field(default=None, repr=False)

    @property
    def tower(self) -> Tower | None:
        """The EL tower, or None when the pre-log does not admit one."""
        if self._tower is None:
            self._tower = False
            if self.pspec is not None and validate_prelog(self.dspec, self.pspec).ok:
                self._tower = Tower(self.dspec, self.pspec, self.hooks,
                                    self.depth, self.max_terms)
        return self._tower or None

    # -- operations -------------------------------------------------------------

    def t(self, i: int, power=1) -> Series:
        return Series.t(i, self.spine, power)

    def derive(self, a: Series) -> Series:
        tw = self.tower
        return tw.derive(a) if tw else derive(a, self.dspec)

    def logderiv(self, a: Series) -> Series:
        if a.is_zero:
            raise MathError("logarithmic derivative of zero")
        if a.is_monomial and a.level == 0:
            return log_derivative(a, self.dspec, self.max_terms)
        return self.derive(a) * invert(a, self.max_terms)

    def ai(self, a: Series) -> Series:
        tw = self.tower
        if tw and a.level > 0:
            return tw._ai_step(a)
        return monomial_ai(a, self.dspec)

    def integrate(self, a: Series, max_iters: int = 64) -> IntegrationResult:
        tw = self.tower
        if tw:
            return tw.integrate(a, max_iters)
        return integrate(a, self.dspec, self.max_terms, max_iters)

    def log(self, a: Series) -> Series:
        tw = self.tower
        if tw:
            return tw.log(a, self.max_terms)
        if self.pspec is None:
            raise MathError(f"field {self.name} has no logarithm")
        return log_series(a, self.pspec, self.hooks, self.max_terms)

    def exp(self, a: Series) -> Series:
        tw = self.tower
        if tw:
            return tw.exp(a, self.max_terms)
        if self.pspec is None:
            raise MathError(f"field {self.name} has no exponential")
        return exp_series(a, self.pspec, self.hooks, self.max_terms)

    def eval(self, a: Series, x: float) -> float:
        return eval_series(a, x, self._germs())

    def derivative_check(self, a: Series, x: float, h: float | None = None) -> dict:
        return numeric_derivative_check(a, x, self._germs(), self.derive, h)

    def _germs(self) -> GermMap:
        if self.germs is None:
            raise ConfigurationError(f"field {self.name} has no germ interpretation")
        return self.germs

    # -- expressions --------------------------------------------------------------

    def parse(self, text: str) -> Series:
        return Evaluator(self).eval(ast.parse_expression(text))

    def with_budget(self, max_terms: int | None = None, depth: int | None = None) -> Field:
        return Field(self.name, self.spine, self.dspec, self.pspec, self.germs, self.hooks,
                     self.max_terms if max_terms is None else max_terms,
                     self.depth if depth is None else depth)


class Evaluator:
    """Evaluates a syntax tree to a series in a given field."""

    def __init__(self, fld: Field):
        self.field = fld
        self.spine = fld.spine

    def eval(self, node) -> Series:
        method = getattr(self, "_" + type(node).__name__)
        return method(node)

    def _Num(self, node: ast.Num) -> Series:
        return Series.const(node.value, self.spine)

    def _Mono(self, node: ast.Mono) -> Series:
        if node.index not in self.spine:
            raise ConfigurationError(f"t{node.index} is not on the spine of {self.field.name}")
        return Series.t(node.index, self.spine, node.power)

    def _TExp(self, node: ast.TExp) -> Series:
        if node.kind == "tuple":
            return Series.monomial(Exponent.from_tuple(node.value, self.spine), 1, self.spine)
        if node.kind == "map":
            e = Exponent(node.value)
            return Series.monomial(self.spine.check(e), 1, self.spine)
        tw = self.field.tower
        if tw is None:
            raise MathError(f"field {self.field.name} has no exponential tower")
        p = self.eval(node.value)
        return Series.monomial(tw.make_exponent(p), 1, self.spine)

    def _Neg(self, node: ast.Neg) -> Series:
        return -self.eval(node.arg)

    def _Pow(self, node: ast.Pow) -> Series:
        base = self.eval(node.base)
        q = node.exponent
        if base.is_monomial:
            e, c = base.terms[0]
            if q.denominator == 1:
                return Series.monomial(e * q, c ** q.numerator, self.spine)
            if c == 1:
                return Series.monomial(e * q, 1, self.spine)
        if q.denominator != 1:
            raise MathError("fractional powers are only defined for monomials")
        n = q.numerator
        if n < 0:
            return invert(base, self.field.max_terms) ** (-n)
        return base ** n

    def _BinOp(self, node: ast.BinOp) -> Series:
        a = self.eval(node.left)
        b = self.eval(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a * invert(b, self.field.max_terms)

    def _Call(self, node: ast.Call) -> Series:
        f = self.field
        if node.name == "O":
            a = self.eval(node.arg)
            if not a.is_monomial:
                raise MathError("O(...) takes a single monomial")
            return Series.big_o(a.terms[0][0], self.spine)
        a = self.eval(node.arg)
        if node.name == "d":
            return f.derive(a)
        if node.name == "ai":
            return f.ai(a)
        if node.name == "int":
            res = f.integrate(a)
            if not res.exact:
                raise MathError(f"integration stopped ({res.status}) with residual left")
            return res.value
        if node.name == "log":
            return f.log(a)
        return f.exp(a)


# -- configuration files ------------------------------------------------------------

def _series(text: str, spine: Spine, what: str) -> Series:
    bare = Field("config", spine, None, None, None, RATIONAL_HOOKS)
    try:
        node = ast.parse_expression(text)
    except Exception as exc:
        raise ConfigurationError(f"{what}: {exc}") from None
    return Evaluator(bare).eval(node)


def _index_entries(section) -> dict[int, str]:
    out = {}
    for key, value in section.items():
        if key == "kind" or key == "sign":
            continue
        k = key[1:] if key.startswith("t") else key
        if not k.isdigit():
            raise ConfigurationError(f"unexpected key {key!r} in [{section.name}]")
        out[int(k)] = value
    return out


def _fractions(text: str) -> list[Fraction]:
    return [Fraction(p.strip()) for p in text.split(",") if p.strip()]


def field_from_config(cp: configparser.ConfigParser, max_terms: int | None = None,
                      depth: int = 3) -> Field:
    if max_terms is None:
        max_terms = default_max_terms()
    for sec in ("spine", "logderiv"):
        if not cp.has_section(sec):
            raise ConfigurationError(f"missing [{sec}] section")
    name = cp.get("field", "name", fallback="custom")

    sp = cp["spine"]
    kind = sp.get("kind", "finite")
    if kind == "finite":
        try:
            spine = Spine.finite(int(p) for p in sp.get("indices", "").split(",") if p.strip())
        except ValueError:
            raise ConfigurationError("spine indices must be integers") from None
    elif kind == "nat":
        spine = Spine.nat()
    else:
        raise ConfigurationError(f"unknown spine kind {kind!r}")

    ld = cp["logderiv"]
    kind = ld.get("kind", "table")
    if kind == "table":
        if not spine.is_finite:
            raise ConfigurationError("a logderiv table needs a finite spine")
        table = {i: _series(v, spine, f"logderiv of t{i}")
                 for i, v in _index_entries(ld).items()}
        dspec: DerivationSpec = TableDerivation(spine, table)
    else:
        if spine.is_finite:
            raise ConfigurationError(f"logderiv kind {kind!r} needs the natural-number spine")
        coeff = Fraction(ld.get("coeff", "-1"))
        if kind == "logs":
            dspec = RecurrentDerivation.logs()
        elif kind == "right-shift":
            dspec = RecurrentDerivation.right_shift(_fractions(ld.get("coefficients", "")), coeff)
        elif kind == "recurrent":
            base = parse_exponent(ld.get("base", "{}"), spine)
            step = parse_exponent(ld.get("step", "{}"), spine)
            dspec = RecurrentDerivation(ThetaFamily(base, step), coeff)
        else:
            raise ConfigurationError(f"unknown logderiv kind {kind!r}")

    pspec: PreLogSpec | None = None
    if cp.has_section("prelog"):
        pl = cp["prelog"]
        kind = pl.get("kind", "table")
        if kind == "from-derivation":
            pspec = DerivedPreLog(dspec, max_terms)
        elif kind == "sigma-shift":
            if spine.is_finite:
                raise ConfigurationError("the sigma-shift pre-log needs the natural-number spine")
            pspec = SigmaShiftPreLog(int(pl.get("sign", "-1")))
        elif kind == "table":
            pspec = TablePreLog(spine, {i: _series(v, spine, f"prelog of t{i}")
                                        for i, v in _index_entries(pl).items()})
        elif kind != "none":
            raise ConfigurationError(f"unknown prelog kind {kind!r}")

    germs = None
    if cp.has_section("germs"):
        gs = cp["germs"]
        kind = gs.get("kind", "table")
        if kind == "logs":
            germs = logs_germs()
        elif kind == "table":
            germs = GermMap(spine, {i: parse_germ_kind(v) for i, v in _index_entries(gs).items()})
        elif kind != "none":
            raise ConfigurationError(f"unknown germs kind {kind!r}")

    hooks_name = cp.get("coefficients", "hooks", fallback="rational")
    hooks = {"rational": RATIONAL_HOOKS, "float": FLOAT_HOOKS}.get(hooks_name)
    if hooks is None:
        raise ConfigurationError(f"unknown coefficient hooks {hooks_name!r}")
    return Field(name, spine, dspec, pspec, germs, hooks, max_terms, depth)


def _read(text: str, source: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot read field config {source}: {exc}") from None
    return cp


def load_field(name_or_path: str, max_terms: int | None = None, depth: int = 3) -> Field:
    """A built-in field by name, or a field config file by path."""
    if name_or_path in BUILTIN:
        text = resources.files("hahnfield").joinpath("data", f"{name_or_path}.ini").read_text()
        source = name_or_path
    else:
        try:
            with open(name_or_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot open field config: {exc}") from None
        source = name_or_path
    return field_from_config(_read(text, source), max_terms, depth)


def leh3(max_terms: int | None = None, depth: int = 3) -> Field:
    return load_field("leh3", max_terms, depth)


def logs(max_terms: int | None = None, depth: int = 3) -> Field:
    return load_field("logs", max_terms, depth)

