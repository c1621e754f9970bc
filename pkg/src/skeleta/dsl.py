"""Parser for the little presentation language.

::

    semiring over Zv;
    gens X contracting, Y contracting;
    rel -1 = X + Y;

Expressions use ``v`` for join and ``+`` for the semiring product, which
binds tighter. Atoms are names, integer multiples like ``2X``, constants
(``3``, ``-1/2``, ``-inf``) and parenthesized expressions. Subtraction and
unary minus are accepted on single terms only, since only those have
inverses in general.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ParseError, SkeletaError, UnknownGenerator
from .presentation import CONTRACTING, FREE, Generator, Presentation, Relation, TropPoly

BASES = {"B": "Bool", "Zv": "Int", "Qv": "Rat"}

_TOKEN = re.compile(r"\s*(?:(<=|[-+()/;,=])|(\d+)|([A-Za-z_][A-Za-z0-9_']*))")


class NotAnElement(SkeletaError):
    """Expression has a negative generator exponent in a semiring without inverses."""


@dataclass
class Token:
    kind: str  # "op", "num", "name", "eof"
    text: str
    line: int
    col: int
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos < len(text) and text[pos] == "#":
            while pos < len(text) and text[pos] != "\n":
                pos += 1
            continue
        if pos >= len(text):
            out.append(Token("eof", "", line, pos - line_start + 1, pos))
            return out
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(line, pos - line_start + 1, "a token", text[pos])
        start = pos + (len(m.group(0)) - len(m.group(0).lstrip()))
        kind = "op" if m.group(1) else "num" if m.group(2) else "name"
        out.append(Token(kind, m.group(m.lastindex), line, start - line_start + 1, start))
        pos = m.end()


# A term is (exponents by name, constant); constant None means -inf.
Term = tuple[dict, Optional[Fraction]]


def _add_terms(a: Term, b: Term) -> Term:
    exps = dict(a[0])
    for k, v in b[0].items():
        exps[k] = exps.get(k, 0) + v
    exps = {k: v for k, v in exps.items() if v}
    if a[1] is None or b[1] is None:
        return exps, None
    return exps, a[1] + b[1]


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected: str):
        t = self.tok
        raise ParseError(t.line, t.col, expected, t.text or "end of input")

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            self.error(repr(text) if text else kind)
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    # expression := sum ("v" sum)*
    def expr(self) -> list[Term]:
        terms = self.sum()
        while self.tok.kind == "name" and self.tok.text == "v":
            self.i += 1
            terms = terms + self.sum()
        return [t for t in terms if t[1] is not None]

    def sum(self) -> list[Term]:
        acc = self.atom()
        while self.at("+") or self.at("-"):
            op = self.take().text
            rhs = self.atom(negate=(op == "-"))
            acc = [_add_terms(a, b) for a in acc for b in rhs]
        return acc

    def number(self) -> Fraction:
        n = Fraction(int(self.take(kind="num").text))
        if self.at("/"):
            self.i += 1
            d = int(self.take(kind="num").text)
            if d == 0:
                self.error("nonzero denominator")
            n /= d
        return n

    def atom(self, negate: bool = False) -> list[Term]:
        t = self.tok
        if t.text == "-" and t.kind == "op":
            self.i += 1
            return self.atom(not negate)
        if t.kind == "name" and t.text == "inf":
            self.i += 1
            if not negate:
                raise ParseError(t.line, t.col, "'-inf' (+inf is not a value)", "inf")
            return [({}, None)]
        if t.text == "(":
            self.i += 1
            if self.at(")"):
                self.error("expression")
            inner = self.expr()
            self.take(")")
            if negate:
                if len(inner) != 1:
                    raise ParseError(t.line, t.col, "a single term under negation", "join")
                return [_neg(inner[0])]
            return inner
        if t.kind == "num":
            c = self.number()
            if self.tok.kind == "name" and self.tok.text not in ("v", "inf"):
                if c.denominator != 1:
                    self.error("integer multiple")
                name = self.take().text
                term = ({name: int(c)}, Fraction(0)) if c else ({}, Fraction(0))
            else:
                term = ({}, c)
            return [_neg(term) if negate else term]
        if t.kind == "name" and t.text != "v":
            self.i += 1
            term = ({t.text: 1}, Fraction(0))
            return [_neg(term) if negate else term]
        self.error("expression")

    # program := stmt*
    def program(self) -> Presentation:
        base = None
        gens: list[Generator] = []
        rels: list[tuple] = []
        while self.tok.kind != "eof":
            t = self.take(kind="name")
            if t.text == "semiring":
                self.take("over")
                b = self.take(kind="name")
                if b.text not in BASES:
                    raise ParseError(b.line, b.col, "B, Zv or Qv", b.text)
                base = BASES[b.text]
            elif t.text == "gens":
                while True:
                    name = self.take(kind="name").text
                    sort = FREE
                    if self.tok.kind == "name" and self.tok.text in (CONTRACTING, FREE):
                        sort = self.take().text
                    gens.append(Generator(name, sort))
                    if not self.at(","):
                        break
                    self.i += 1
            elif t.text == "rel":
                start = self.tok
                lhs = self.expr()
                if self.at("<="):
                    kind = "Leq"
                elif self.at("="):
                    kind = "Eq"
                else:
                    self.error("'=' or '<='")
                self.i += 1
                if self.at(";"):
                    self.error("expression")
                rhs = self.expr()
                rels.append((kind, lhs, rhs, start))
            else:
                raise ParseError(t.line, t.col, "'semiring', 'gens' or 'rel'", t.text)
            self.take(";")
        if base is None:
            raise ParseError(1, 1, "'semiring over ...' header", "")
        names = [g.name for g in gens]
        P0 = Presentation(base, tuple(gens))
        relations = []
        for kind, lhs, rhs, start in rels:
            try:
                relations.append(Relation(kind, to_poly(lhs, names), to_poly(rhs, names)))
            except UnknownGenerator as err:
                raise ParseError(start.line, start.col, "a declared generator", err.detail["name"]) from None
        return Presentation(P0.base, P0.generators, tuple(relations))


def _neg(term: Term) -> Term:
    exps, c = term
    if c is None:
        raise ValueError("-inf has no inverse")
    return {k: -v for k, v in exps.items()}, -c


def to_poly(terms: list[Term], names: list[str]) -> TropPoly:
    out = []
    for exps, c in terms:
        vec = [0] * len(names)
        for k, v in exps.items():
            if k not in names:
                raise UnknownGenerator(f"unknown generator {k!r}", name=k)
            if v < 0:
                raise NotAnElement(f"negative power of {k}", name=k)
            vec[names.index(k)] = v
        out.append((tuple(vec), c))
    return TropPoly(out, len(names))


def parse_presentation(text: str) -> Presentation:
    return Parser(text).program()


def parse_terms(text: str) -> list[Term]:
    p = Parser(text)
    if p.tok.kind == "eof":
        p.error("expression")
    terms = p.expr()
    if p.tok.kind != "eof":
        p.error("end of expression")
    return terms


def parse_element(text: str, P: Presentation) -> TropPoly:
    e = to_poly(parse_terms(text), P.names)
    P.check(e)
    return e


def parse_negated(text: str) -> tuple[list[Term], bool]:
    """Parse ``e`` or ``-(e)``; the flag says whether the outer minus was present."""
    p = Parser(text)
    negated = False
    if p.at("-") and p.toks[p.i + 1].text == "(":
        close = _matching_paren(p.toks, p.i + 1)
        if close is not None and p.toks[close + 1].kind == "eof":
            negated = True
            p.i += 1
    terms = p.expr()
    if p.tok.kind != "eof":
        p.error("end of expression")
    return terms, negated


def _matching_paren(toks: list[Token], i: int) -> Optional[int]:
    depth = 0
    for j in range(i, len(toks)):
        if toks[j].text == "(":
            depth += 1
        elif toks[j].text == ")":
            depth -= 1
            if depth == 0:
                return j
    return None
