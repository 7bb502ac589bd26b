"""Tokenizer and recursive-descent parser for the infix term syntax.

Precedence, loosest first: ``<->``, ``->`` (right associative), ``||``,
``&&``, ``!``, comparisons, ``+``/``-``, ``*``, unary ``-``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import term as T
from .term import Kind, ParseError, Sort, Term, TermError, Var

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<op><->|->|\|->|:=|&&|\|\||<=|>=|==|!=|[-+*/<>=!(),.:;?])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'?)
""", re.VERBOSE)

KEYWORDS = {"true", "false", "ite", "abs", "floor", "exists", "forall"}


@dataclass(frozen=True)
class Token:
    kind: str  # num, op, ident, eof
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


_CMP = {"<=": T.le, "<": T.lt, ">=": T.ge, ">": T.gt, "=": T.eq, "==": T.eq, "!=": T.ne}
_SORTS = {"int": Sort.INT, "real": Sort.REAL, "bool": Sort.BOOL}


class TermParser:
    """Parses terms from a token list; ``context`` maps names to variables.
    Holes are written ``?name`` and must be present in the context under
    their bare name (or are created as Int holes when ``auto_holes``)."""

    def __init__(self, tokens: list[Token], context: Mapping[str, Var],
                 auto_holes: bool = False):
        self.toks = tokens
        self.i = 0
        self.ctx = dict(context)
        self.auto_holes = auto_holes

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text in texts

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"syntax error: {message}, found {found}", tok.offset)

    def _wrap(self, fn, tok, *args):
        try:
            return fn(*args)
        except ParseError:
            raise
        except T.NonlinearError as e:
            raise ParseError(f"nonlinear expression: {e}", tok.offset) from e
        except TermError as e:
            raise ParseError(f"sort error: {e}", tok.offset) from e

    # grammar
    def parse_expr(self) -> Term:
        return self.parse_iff()

    def parse_iff(self) -> Term:
        left = self.parse_implies()
        while self.at("<->"):
            tok = self.advance()
            right = self.parse_implies()
            left = self._wrap(T.iff, tok, left, right)
        return left

    def parse_implies(self) -> Term:
        left = self.parse_or()
        if self.at("->"):
            tok = self.advance()
            right = self.parse_implies()
            return self._wrap(T.implies, tok, left, right)
        return left

    def parse_or(self) -> Term:
        left = self.parse_and()
        while self.at("||"):
            tok = self.advance()
            left = self._wrap(T.or_, tok, left, self.parse_and())
        return left

    def parse_and(self) -> Term:
        left = self.parse_not()
        while self.at("&&"):
            tok = self.advance()
            left = self._wrap(T.and_, tok, left, self.parse_not())
        return left

    def parse_not(self) -> Term:
        if self.at("!"):
            tok = self.advance()
            return self._wrap(T.not_, tok, self.parse_not())
        return self.parse_cmp()

    def parse_cmp(self) -> Term:
        left = self.parse_sum()
        if self.tok.kind == "op" and self.tok.text in _CMP:
            tok = self.advance()
            right = self.parse_sum()
            if tok.text in ("=", "==") and left.sort is Sort.BOOL:
                return self._wrap(T.iff, tok, left, right)
            return self._wrap(_CMP[tok.text], tok, left, right)
        return left

    def parse_sum(self) -> Term:
        left = self.parse_product()
        while self.at("+", "-"):
            tok = self.advance()
            right = self.parse_product()
            fn = T.add if tok.text == "+" else T.sub
            left = self._wrap(fn, tok, left, right)
        return left

    def parse_product(self) -> Term:
        left = self.parse_unary()
        while self.at("*"):
            tok = self.advance()
            right = self.parse_unary()
            left = self._wrap(T.times, tok, left, right)
        return left

    def parse_unary(self) -> Term:
        if self.at("-"):
            tok = self.advance()
            if self.tok.kind == "num":
                lit = self.parse_literal()
                return T.const(-lit.value, lit.sort)
            return self._wrap(T.neg, tok, self.parse_unary())
        return self.parse_primary()

    def parse_literal(self) -> Term:
        tok = self.advance()
        if "." in tok.text:
            value = Fraction(tok.text)
            if self.at("/"):
                self.error("rational literal must use integers")
            return T.const(value, Sort.REAL)
        if self.at("/"):
            self.advance()
            if self.tok.kind != "num" or "." in self.tok.text:
                self.error("expected integer denominator")
            den = int(self.advance().text)
            if den == 0:
                raise ParseError("division by zero", tok.offset)
            return T.const(Fraction(int(tok.text), den), Sort.REAL)
        return T.const(int(tok.text), Sort.INT)

    def parse_primary(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            return self.parse_literal()
        if self.at("("):
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if self.at("?"):
            self.advance()
            name_tok = self.advance()
            if name_tok.kind != "ident":
                self.error("expected hole name", name_tok)
            v = self.ctx.get(name_tok.text)
            if v is None or v.kind is not Kind.HOLE:
                if not self.auto_holes:
                    raise ParseError(f"unknown hole ?{name_tok.text}", name_tok.offset)
                v = Var(name_tok.text, Kind.HOLE, Sort.INT)
                self.ctx[name_tok.text] = v
            return T.var(v)
        if tok.kind == "ident":
            if tok.text in ("true", "false"):
                self.advance()
                return T.TRUE if tok.text == "true" else T.FALSE
            if tok.text in ("ite", "abs", "floor"):
                return self.parse_call()
            if tok.text in ("exists", "forall"):
                return self.parse_quant()
            self.advance()
            v = self.ctx.get(tok.text)
            if v is None or v.kind is Kind.HOLE:
                raise ParseError(f"unknown variable {tok.text!r}", tok.offset)
            return T.var(v)
        self.error("expected expression")

    def parse_call(self) -> Term:
        tok = self.advance()
        self.expect("(")
        args = [self.parse_expr()]
        while self.at(","):
            self.advance()
            args.append(self.parse_expr())
        self.expect(")")
        arity = 3 if tok.text == "ite" else 1
        if len(args) != arity:
            raise ParseError(f"{tok.text} expects {arity} argument(s)", tok.offset)
        fn = {"ite": T.ite, "abs": T.abs_, "floor": T.floor}[tok.text]
        return self._wrap(fn, tok, *args)

    def parse_quant(self) -> Term:
        tok = self.advance()
        bound = []
        saved = dict(self.ctx)
        while True:
            name = self.advance()
            if name.kind != "ident":
                self.error("expected variable name", name)
            self.expect(":")
            sort_tok = self.advance()
            if sort_tok.text not in _SORTS:
                self.error("expected sort", sort_tok)
            v = self.ctx.get(name.text)
            if v is None or v.sort is not _SORTS[sort_tok.text]:
                v = Var(name.text, Kind.BOUND, _SORTS[sort_tok.text])
            self.ctx[name.text] = v
            bound.append(v)
            if not self.at(","):
                break
            self.advance()
        self.expect(".")
        body = self.parse_expr()
        self.ctx = saved
        fn = T.exists if tok.text == "exists" else T.forall
        return self._wrap(fn, tok, bound, body)


def context_of(vs) -> dict[str, Var]:
    return {v.name: v for v in vs}


def parse_term(text: str, context: Mapping[str, Var] | list[Var] | frozenset = (),
               auto_holes: bool = False) -> Term:
    """Parse ``text``; ``context`` declares the variables in scope."""
    if not isinstance(context, Mapping):
        context = context_of(context)
    p = TermParser(tokenize(text), context, auto_holes)
    t = p.parse_expr()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return t
