"""Tiny expression language for rational series.

Grammar (ASCII, usual precedence):

    expr    := ['-'] term (('+' | '-') term)*
    term    := postfix ('*' postfix)*
    postfix := atom ('[' INT ']')*
    atom    := INT | 'L' ['^' INT] | 'T' ['^' INT]
             | 'gen' '(' INT ',' INT ')'
             | 'dr' '(' INT ',' INT ',' INT ')'
             | 'lim' '(' expr ')'
             | '(' expr ')'

`gen(a,b)` is the generator T^b/(T^b - L^a), `dr(p,q,r)` the normalized form
of T^q/(T^r - L^p), `[d]` coefficient extraction, and `lim` the limit at
T = infinity (returned as a constant series).
"""

from __future__ import annotations

import re

from .errors import ParseError
from .motivic import (
    GClass,
    RationalSeries,
    extract_d,
    limit_T_inf,
    normalize_DR,
)

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z]+|\^|[()\[\],+\-*])")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'}, got {tok!r}")
        self.pos += 1
        return tok

    def integer(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"expected an integer, got {tok!r}")
        return sign * int(tok)

    def expr(self) -> RationalSeries:
        if self.peek() == "-":
            self.take()
            value = -self.term()
        else:
            value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RationalSeries:
        value = self.postfix()
        while self.peek() == "*":
            self.take()
            value = value * self.postfix()
        return value

    def postfix(self) -> RationalSeries:
        value = self.atom()
        while self.peek() == "[":
            self.take()
            d = self.integer()
            self.take("]")
            value = extract_d(value, d)
        return value

    def atom(self) -> RationalSeries:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok.isdigit():
            return RationalSeries.constant(int(self.take()))
        if tok == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if tok in ("L", "T"):
            self.take()
            e = 1
            if self.peek() == "^":
                self.take()
                e = self.integer()
            if tok == "L":
                return RationalSeries.constant(GClass({e: 1}))
            if e < 0:
                raise ParseError("negative powers of T are not allowed")
            return RationalSeries.monomial(1, e)
        if tok == "gen":
            self.take()
            self.take("(")
            a = self.integer()
            self.take(",")
            b = self.integer()
            self.take(")")
            return RationalSeries.generator(a, b)
        if tok == "dr":
            self.take()
            self.take("(")
            p = self.integer()
            self.take(",")
            q = self.integer()
            self.take(",")
            r = self.integer()
            self.take(")")
            return normalize_DR(p, q, r)
        if tok == "lim":
            self.take()
            self.take("(")
            value = self.expr()
            self.take(")")
            return RationalSeries.constant(limit_T_inf(value))
        raise ParseError(f"unexpected token {tok!r}")


def parse_series(text: str) -> RationalSeries:
    parser = _Parser(_tokenize(text))
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input from {parser.peek()!r}")
    return value
