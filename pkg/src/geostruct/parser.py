"""Recursive-descent parser for the expression DSL.

Grammar::

    expr     := term (('+' | '-') term)*
    term     := ['-'] factor ('*' factor)*
    factor   := atom ('^' positive_integer)*
    atom     := rational | 'exp' '(' signed_integer '*' 'x3' ')'
              | symbol "'"* | '(' expr ')'
    rational := integer ['/' positive_integer]

Whitespace between tokens is ignored.  Function symbols must be declared by
the caller; ``exp`` and ``x3`` are reserved.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, NamedTuple

from .expr import Expr

DEFAULT_SYMBOLS = ("a", "b")
RESERVED = {"exp", "x3"}
PRIMES = ("'", "′")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        self.text = text
        super().__init__(f"{message} at byte offset {self.offset}")


class UnknownSymbolError(ExprSyntaxError):
    pass


class _Tok(NamedTuple):
    kind: str  # 'int', 'name', 'op', 'prime', 'end'
    value: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(['′])|([-+*/^()]))")


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        kind = {1: "int", 2: "name", 3: "prime", 4: "op"}[m.lastindex]
        toks.append(_Tok(kind, m.group(m.lastindex), start))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, symbols: Iterable[str]):
        self.text = text
        self.symbols = set(symbols)
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ExprSyntaxError(msg, self.text, tok.pos)

    def accept(self, value: str) -> bool:
        if self.tok.kind == "op" and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            found = self.tok.value or "end of input"
            self.error(f"expected {value!r}, found {found!r}")

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            self.error("expected an integer")
        v = int(self.tok.value)
        self.i += 1
        return v

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            self.error("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected token {self.tok.value!r}")
        return e

    def expr(self) -> Expr:
        acc = self.term()
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Expr:
        # a single unary minus may precede any term
        if self.accept("-"):
            return -self.term_body()
        return self.term_body()

    def term_body(self) -> Expr:
        acc = self.factor()
        while self.accept("*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> Expr:
        base = self.atom()
        while self.accept("^"):
            n = self.expect_int()
            if n < 1:
                self.error("exponent must be a positive integer", self.toks[self.i - 1])
            base = base ** n
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            num = self.expect_int()
            if self.accept("/"):
                den_tok = self.tok
                den = self.expect_int()
                if den == 0:
                    self.error("zero denominator", den_tok)
                return Expr.const(Fraction(num, den))
            return Expr.const(num)
        if tok.kind == "op" and tok.value == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            if tok.value == "exp":
                return self.exponential()
            if tok.value in RESERVED or tok.value not in self.symbols:
                raise UnknownSymbolError(f"unknown function symbol {tok.value!r}", self.text, tok.pos)
            self.i += 1
            order = 0
            while self.tok.kind == "prime":
                order += 1
                self.i += 1
            return Expr.func(tok.value, order)
        found = tok.value or "end of input"
        self.error(f"unexpected token {found!r}")

    def exponential(self) -> Expr:
        self.i += 1
        self.expect("(")
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        k = sign * self.expect_int()
        self.expect("*")
        if not (self.tok.kind == "name" and self.tok.value == "x3"):
            self.error("expected 'x3'")
        self.i += 1
        self.expect(")")
        return Expr.exp(k)


def parse_expr(text: str, symbols: Iterable[str] = DEFAULT_SYMBOLS) -> Expr:
    """Parse DSL ``text`` into a canonical :class:`Expr`."""
    return _Parser(text, symbols).parse()
