"""Parser for the identity input mini-language.

Grammar (documented in the README):

    expr    := term (('+' | '-') term)*
    term    := [coefficient ['*']] factor+
    factor  := variable | '(' expr ')' | '[' expr ',' expr ']'
    variable:= 'x' digit primes        e.g. x1, x2', x3''
    coefficient := integer ['/' integer]

Juxtaposed factors multiply left-associatively, so "(x1 x2 x3)" is
"((x1 x2) x3)".  Brackets are commutators: [a, b] = ab - ba.  The
result is an NAPoly; multilinearity is checked at translation time, not
here, so repeated slots can be fed to `linearize`.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import IdentityParseError
from .identities import NAPoly, commutator, poly, var

_TOKEN = re.compile(r"\s*(x[1-9]'*|\d+|[()\[\],+\-*/])")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise IdentityParseError(
                    f"unexpected character {text[pos:].lstrip()[0]!r}", pos
                )
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def where(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> NAPoly:
        out = self.parse_expr()
        if self.peek() is not None:
            raise IdentityParseError(
                f"unexpected token {self.peek()!r}", self.where()
            )
        if not out:
            raise IdentityParseError("empty identity", 0)
        return out

    def parse_expr(self) -> NAPoly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        out = self.parse_term().scale(sign)
        while self.peek() in ("+", "-"):
            op = self.take()
            term = self.parse_term()
            out = out + (term if op == "+" else -term)
        return out

    def parse_term(self) -> NAPoly:
        coeff = Fraction(1)
        tok = self.peek()
        if tok is not None and tok.isdigit():
            coeff = Fraction(int(self.take()))
            if self.peek() == "/":
                self.take()
                den = self.take()
                if den is None or not den.isdigit() or int(den) == 0:
                    raise IdentityParseError("bad rational coefficient", self.where())
                coeff /= int(den)
            if self.peek() == "*":
                self.take()
        out = None
        while True:
            tok = self.peek()
            if tok is None or tok in ("+", "-", ",", ")", "]"):
                break
            factor = self.parse_factor()
            out = factor if out is None else out * factor
        if out is None:
            raise IdentityParseError("expected a monomial", self.where())
        return out.scale(coeff)

    def parse_factor(self) -> NAPoly:
        tok = self.take()
        if tok is None:
            raise IdentityParseError("unexpected end of input", self.where())
        if tok.startswith("x"):
            primes = len(tok) - tok.index("'") if "'" in tok else 0
            slot = int(tok[1])
            return poly(var(slot, primes))
        if tok == "(":
            inner = self.parse_expr()
            if self.take() != ")":
                raise IdentityParseError("missing ')'", self.where())
            return inner
        if tok == "[":
            left = self.parse_expr()
            if self.take() != ",":
                raise IdentityParseError("missing ',' in commutator", self.where())
            right = self.parse_expr()
            if self.take() != "]":
                raise IdentityParseError("missing ']'", self.where())
            return commutator(left, right)
        raise IdentityParseError(f"unexpected token {tok!r}", self.where())


def parse_identity(text: str) -> NAPoly:
    """Parse an identity expression into an NAPoly (no signature attached)."""
    return _Parser(text).parse()
