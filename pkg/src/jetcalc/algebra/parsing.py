"""Parser for the polynomial text grammar.

    expr    := term (("+" | "-") term)*
    term    := ("+" | "-")? factor ("*" factor)*
    factor  := atom ("^" INTEGER)?
    atom    := INTEGER ("/" INTEGER)? | IDENT | "(" expr ")"

Whitespace is insignificant and multiplication is never implicit.
Parenthesised subexpressions are accepted in addition to plain term sums.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .polynomial import Polynomial, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            tokens.append((ch, ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing, line=None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.line = line

    def error(self, message, tok=None):
        tok = tok or self.tokens[self.i]
        return ParseError(message, tok[2], self.line)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"syntax error: expected {kind}, found {found}", tok)
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("syntax error: empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"syntax error: unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.factor()
        return p if sign == 1 else -p

    def factor(self):
        p = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise self.error("syntax error: exponent must be a nonnegative integer", tok)
            self.take()
            p = p ** int(tok[1])
        return p

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            value = Fraction(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.peek()
                if den[0] != "int":
                    raise self.error("syntax error: rational denominator must be an integer", den)
                self.take()
                if int(den[1]) == 0:
                    raise self.error("division by zero", den)
                value = value / int(den[1])
            return self.ring.constant(value)
        if kind == "ident":
            self.take()
            if tok[1] not in self.ring:
                raise self.error(f"undeclared variable {tok[1]!r}", tok)
            return self.ring.gen(tok[1])
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        found = "end of input" if kind == "end" else repr(tok[1])
        raise self.error(f"syntax error: unexpected {found}", tok)


def parse_polynomial(text: str, ring, line: int | None = None) -> Polynomial:
    """Parse ``text`` over ``ring`` (a :class:`PolyRing` or a list of names)."""
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring)
    if ring.nvars == 0:
        raise ValueError("at least one variable must be declared")
    return _Parser(text, ring, line).parse()
