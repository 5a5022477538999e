"""Expression language for series.

Grammar (EBNF; precedence from loosest to tightest)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = ("-" | "+") unary | power ;
    power    = atom [ "^" exponent ] ;
    exponent = ["-" | "+"] INT | "{" rational "}" ;
    atom     = NUMBER | MONO | "t" "^" texp | FUNC "(" expr ")" | "(" expr ")" ;
    texp     = "(" rational { "," rational } ")"      (* tuple over a finite spine *)
             | "{" [ INT ":" rational { "," INT ":" rational } ] "}"  (* sparse map *)
             | "{" expr "}" ;                          (* tower monomial exp(expr) *)
    rational = ["-" | "+"] INT [ "/" INT ] ;
    FUNC     = "log" | "exp" | "d" | "ai" | "int" | "O" ;
    MONO     = "t" INT ;

``O(m)`` denotes an unknown tail starting at the monomial m.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError

FUNCTIONS = ("log", "exp", "d", "ai", "int", "O")


# -- syntax tree -------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Mono:
    index: int
    power: Fraction = Fraction(1)


@dataclass(frozen=True)
class TExp:
    kind: str  # "tuple" | "map" | "payload"
    value: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


# -- tokens -----------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # NUM MONO NAME OP END
    text: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<mono>t\d+)|(?P<name>[A-Za-z_]+)"
                       r"|(?P<op>[-+*/^(){},:]))")


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup.upper()
        start = m.start(m.lastgroup)
        out.append(Token(kind, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(Token("END", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "END" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", self.text, tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "OP" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "NUM" or "." in tok.text:
            self.error("expected an integer")
        self.i += 1
        return int(tok.text)

    def sign(self) -> int:
        if self.accept("-"):
            return -1
        self.accept("+")
        return 1

    def rational(self) -> Fraction:
        sign = self.sign()
        q = Fraction(self.integer())
        if self.accept("/"):
            tok = self.tok
            den = self.integer()
            if den == 0:
                self.error("zero denominator", tok)
            q /= den
        return sign * q

    # -- grammar ------------------------------------------------------------------

    def parse(self):
        node = self.expr()
        if self.tok.kind != "END":
            self.error("unexpected token")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def exponent(self) -> Fraction:
        if self.accept("{"):
            q = self.rational()
            self.expect("}")
            return q
        tok = self.tok
        if tok.kind == "NUM" or (tok.kind == "OP" and tok.text in "+-"):
            sign = self.sign()
            return sign * Fraction(self.integer())
        self.error("expected an exponent")

    def power(self):
        node = self.atom()
        if self.accept("^"):
            q = self.exponent()
            if isinstance(node, Mono):
                return Mono(node.index, node.power * q)
            return Pow(node, q)
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "NUM":
            self.i += 1
            return Num(Fraction(tok.text))
        if tok.kind == "MONO":
            self.i += 1
            return Mono(int(tok.text[1:]))
        if tok.kind == "NAME":
            if tok.text == "t":
                self.i += 1
                self.expect("^")
                return self.texp()
            if tok.text in FUNCTIONS:
                self.i += 1
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            self.error("unknown name", tok)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a value")

    def texp(self):
        if self.accept("("):
            vals = [self.rational()]
            while self.accept(","):
                vals.append(self.rational())
            self.expect(")")
            return TExp("tuple", tuple(vals))
        if not self.accept("{"):
            self.error("expected '(' or '{' after 't^'")
        if self._is_map():
            pairs = []
            if not self.accept("}"):
                while True:
                    k = self.integer()
                    self.expect(":")
                    pairs.append((k, self.rational()))
                    if self.accept("}"):
                        break
                    self.expect(",")
            return TExp("map", tuple(pairs))
        node = self.expr()
        self.expect("}")
        return TExp("payload", node)

    def _is_map(self) -> bool:
        t0 = self.toks[self.i]
        if t0.kind == "OP" and t0.text == "}":
            return True
        t1 = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else t0
        return t0.kind == "NUM" and t1.kind == "OP" and t1.text == ":"


def parse_expression(text: str):
    """Syntax tree for ``text``; raises :class:`ParseError` with line and column."""
    return _Parser(text).parse()
