"""Recursive-descent parser for the polynomial input grammar.

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := int | ident | '(' expr ')'

Identifiers are [a-z][0-9]*; juxtaposition is not multiplication, so "x1y1"
lexes as one name and is rejected as an unknown variable.
"""
from __future__ import annotations

import re

from ..errors import PolySyntaxError, UnknownVariableError
from .poly import Ambient, RationalPolynomial

_TOKEN_RE = re.compile(r"(?P<int>\d+)|(?P<name>[a-z][a-z0-9]*)|(?P<op>[-+*^()])")
_WS_RE = re.compile(r"\s+")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks = []  # (kind, value, offset)
        pos = 0
        while pos < len(text):
            ws = _WS_RE.match(text, pos)
            if ws:
                pos = ws.end()
                continue
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
            if m.lastgroup == "int":
                self.toks.append(("int", int(m.group()), pos))
            elif m.lastgroup == "name":
                self.toks.append(("name", m.group(), pos))
            else:
                self.toks.append((m.group(), m.group(), pos))
            pos = m.end()
        self.toks.append(("end", None, len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {t[1]!r}", t[2])
        return t


def parse_poly(text: str, ambient: Ambient) -> RationalPolynomial:
    """Parse text into an exact polynomial on the given ambient."""
    toks = _Tokens(text)
    p = _expr(toks, ambient)
    t = toks.peek()
    if t[0] != "end":
        raise PolySyntaxError(f"trailing input {t[1]!r}", t[2])
    return p


def _expr(toks, ambient):
    negate = False
    if toks.peek()[0] == "-":
        toks.next()
        negate = True
    p = _term(toks, ambient)
    if negate:
        p = -p
    while toks.peek()[0] in ("+", "-"):
        op = toks.next()[0]
        q = _term(toks, ambient)
        p = p + q if op == "+" else p - q
    return p


def _term(toks, ambient):
    p = _factor(toks, ambient)
    while toks.peek()[0] == "*":
        toks.next()
        p = p * _factor(toks, ambient)
    return p


def _factor(toks, ambient):
    p = _base(toks, ambient)
    if toks.peek()[0] == "^":
        toks.next()
        t = toks.expect("int")
        p = p ** t[1]
    return p


def _base(toks, ambient):
    kind, value, offset = toks.next()
    if kind == "int":
        return RationalPolynomial.constant(ambient, value)
    if kind == "name":
        if value not in ambient.variables:
            raise UnknownVariableError(value, offset)
        return RationalPolynomial.variable(ambient, value)
    if kind == "(":
        p = _expr(toks, ambient)
        toks.expect(")")
        return p
    raise PolySyntaxError(f"expected integer, variable or '(', found {value!r}", offset)
