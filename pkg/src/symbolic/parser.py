"""
Recursive-descent parser for the expression language.

    expr    := factor ( ["*"] factor )*
    factor  := primary ( "^-1" )*
    primary := "1" | "(" expr ")" | sugar | hom "(" expr ")" | atom
    sugar   := ("sigma_" | "tr_") ( ident | "{" expr "}" ) "(" expr ")"

An identifier written directly against "(" is a hom application; with a
space in between it is a juxtaposed atom unless the hom table declares it.
``sigma_u(x)`` expands to u^-1 x u and ``tr_u(x)`` to u x u^-1 at parse time.
"""
from __future__ import annotations

import logging
import re
from typing import Collection, List, NamedTuple, Optional

from ..errors import ExpressionSyntaxError
from .expressions import ONE, Atom, Expression, conjugate, hom_app, inverse, product, transport

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"\s*(?:(?P<inv>\^-1)|(?P<ident>[A-Za-z][A-Za-z0-9_']*)|(?P<one>1(?![0-9]))|(?P<punct>[()*{}]))"
)
SUGAR_PREFIXES = {"sigma_": conjugate, "tr_": transport}


class Token(NamedTuple):
    kind: str
    text: str
    start: int
    end: int


class ExpressionParser:
    """Parses one expression; collects unknown-symbol warnings when tables are supplied."""

    def __init__(self, symbols: Optional[Collection[str]] = None, homs: Optional[Collection[str]] = None,
                 patterns: Collection[str] = ()):
        self.symbols = None if symbols is None else set(symbols)
        self.homs = None if homs is None else set(homs)
        self.patterns = set(patterns)
        self.warnings: List[str] = []
        self._text = ""
        self._tokens: List[Token] = []
        self._pos = 0

    # -- tokens -------------------------------------------------------------

    def _offset(self, index: int) -> int:
        return len(self._text[:index].encode("utf-8"))

    def _error(self, message: str, index: int) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(message, self._offset(index), self._text)

    def _tokenize(self, text: str) -> List[Token]:
        tokens: List[Token] = []
        index = 0
        while index < len(text):
            if text[index:].strip() == "":
                break
            m = _TOKEN.match(text, index)
            if m is None:
                bad = index + len(text[index:]) - len(text[index:].lstrip())
                raise self._error(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            tokens.append(Token(kind, m.group(kind), m.start(kind), m.end(kind)))
            index = m.end()
        return tokens

    def _peek(self) -> Optional[Token]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise self._error("unexpected end of expression", len(self._text))
        self._pos += 1
        return tok

    def _expect(self, text: str) -> Token:
        tok = self._peek()
        if tok is None or tok.text != text:
            where = len(self._text) if tok is None else tok.start
            found = "end of expression" if tok is None else repr(tok.text)
            raise self._error(f"expected {text!r}, found {found}", where)
        self._pos += 1
        return tok

    # -- grammar ------------------------------------------------------------

    def parse(self, text: str) -> Expression:
        self._text = text
        self._tokens = self._tokenize(text)
        self._pos = 0
        if not self._tokens:
            raise self._error("empty expression", 0)
        e = self._expr()
        tok = self._peek()
        if tok is not None:
            raise self._error(f"unexpected {tok.text!r}", tok.start)
        return e

    def _starts_factor(self, tok: Optional[Token]) -> bool:
        return tok is not None and (tok.kind in ("ident", "one") or tok.text == "(")

    def _expr(self) -> Expression:
        factors = [self._factor()]
        while True:
            tok = self._peek()
            if tok is not None and tok.text == "*":
                self._next()
                factors.append(self._factor())
            elif self._starts_factor(tok):
                factors.append(self._factor())
            else:
                return product(*factors)

    def _factor(self) -> Expression:
        e = self._primary()
        while (tok := self._peek()) is not None and tok.kind == "inv":
            self._next()
            e = inverse(e)
        return e

    def _primary(self) -> Expression:
        tok = self._next()
        if tok.kind == "one":
            return ONE
        if tok.text == "(":
            e = self._expr()
            self._expect(")")
            return e
        if tok.kind != "ident":
            raise self._error(f"unexpected {tok.text!r}", tok.start)
        for prefix, expand in SUGAR_PREFIXES.items():
            if tok.text.startswith(prefix):
                return self._sugar(tok, prefix, expand)
        following = self._peek()
        if following is not None and following.text == "(" and (
                following.start == tok.end or (self.homs is not None and tok.text in self.homs)):
            self._next()
            arg = self._expr()
            self._expect(")")
            self._check_hom(tok)
            return hom_app(tok.text, arg)
        self._check_atom(tok)
        return Atom(tok.text)

    def _sugar(self, tok: Token, prefix: str, expand) -> Expression:
        subscript = tok.text[len(prefix):]
        if subscript:
            self._check_atom(Token("ident", subscript, tok.start + len(prefix), tok.end))
            u: Expression = Atom(subscript)
        else:
            self._expect("{")
            u = self._expr()
            self._expect("}")
        self._expect("(")
        x = self._expr()
        self._expect(")")
        return expand(u, x)

    def _check_atom(self, tok: Token) -> None:
        if self.symbols is not None and tok.text not in self.symbols and tok.text not in self.patterns:
            self._warn(f"unknown symbol {tok.text!r} at byte {self._offset(tok.start)}")

    def _check_hom(self, tok: Token) -> None:
        if self.homs is not None and tok.text not in self.homs:
            self._warn(f"unknown hom {tok.text!r} at byte {self._offset(tok.start)}")

    def _warn(self, message: str) -> None:
        logger.warning(message)
        self.warnings.append(message)


def parse(text: str, symbols: Optional[Collection[str]] = None, homs: Optional[Collection[str]] = None,
          patterns: Collection[str] = ()) -> Expression:
    return ExpressionParser(symbols, homs, patterns).parse(text)
