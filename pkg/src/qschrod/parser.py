"""Recursive-descent parser for the printed operator syntax.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := (NUMBER | "x" | "t" | "dx" | "dt" | "z" | "m"
               | "Sx" "[" RATIONAL "]" | "St" "[" RATIONAL "]"
               | "(" expr ")") ("@" INT)?

A site tag ``@k`` places an operator atom on site ``k``; untagged atoms
live on site 0. Division is accepted when the divisor is a rational
constant, or when both sides are free of operator atoms. ``(1 - Sx[-1])/z``
is therefore rejected; write ``(1/z)*(1 - Sx[-1])``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .opalg import Dt, Dx, OperatorExpr, St, Sx, T, X, const
from .opalg.scalar import FIELD, m, z

__all__ = ["ParseError", "UnknownSymbol", "parse_expr"]


class ParseError(SyntaxError):
    """Malformed input; ``pos`` is the character offset of the problem."""

    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


class UnknownSymbol(ParseError):
    pass


_TOKEN = re.compile(r"(?P<num>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()\[\]@])")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        toks.append(_Tok(mt.lastgroup, mt.group(), pos))
        pos = mt.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


# values are either a Scalar (no operator atoms) or an OperatorExpr
def _is_scalar(v) -> bool:
    return not isinstance(v, OperatorExpr)


def _as_op(v) -> OperatorExpr:
    return v if isinstance(v, OperatorExpr) else const(v)


def _constant(v):
    """The rational value of a constant Scalar, else None."""
    if not _is_scalar(v):
        return None
    if v.numer.is_ground and v.denom.is_ground:
        return v
    return None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        t = self.cur
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = text or kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", t.pos, self.text)
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.cur.kind != "end":
            raise ParseError(f"unexpected {self.cur.text!r}", self.cur.pos, self.text)
        return v

    def expr(self):
        v = self.term()
        while self.cur.text in ("+", "-"):
            op = self.take().text
            w = self.term()
            if _is_scalar(v) and _is_scalar(w):
                v = v + w if op == "+" else v - w
            else:
                v = _as_op(v) + _as_op(w) if op == "+" else _as_op(v) - _as_op(w)
        return v

    def term(self):
        v = self.unary()
        while self.cur.text in ("*", "/"):
            tok = self.take()
            w = self.unary()
            if tok.text == "*":
                if _is_scalar(v) and _is_scalar(w):
                    v = v * w
                elif _is_scalar(v):
                    v = w.scale(v)
                else:
                    v = v * _as_op(w)
                continue
            if not _is_scalar(w):
                raise ParseError("cannot divide by an operator", tok.pos, self.text)
            if not _is_scalar(v) and _constant(w) is None:
                raise ParseError("an operator may only be divided by a rational constant", tok.pos, self.text)
            if w == 0:
                raise ParseError("division by zero", tok.pos, self.text)
            v = v / w if _is_scalar(v) else v.scale(1 / w)
        return v

    def unary(self):
        if self.cur.text == "-":
            self.take()
            v = self.unary()
            return -v if _is_scalar(v) else v.scale(-1)
        if self.cur.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.cur.text == "^":
            self.take()
            e = int(self.take(kind="num").text)
            v = v**e
        return v

    def _site(self) -> int | None:
        if self.cur.text == "@":
            self.take()
            return int(self.take(kind="num").text)
        return None

    def _rational(self) -> Fraction:
        sign = 1
        if self.cur.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        num = Fraction(int(self.take(kind="num").text))
        if self.cur.text == "/":
            self.take()
            num /= int(self.take(kind="num").text)
        return sign * num

    def atom(self):
        t = self.cur
        if t.kind == "num":
            self.take()
            return FIELD(int(t.text))
        if t.text == "(":
            self.take()
            v = self.expr()
            self.take(")")
            site = self._site()
            if site is not None:
                if _is_scalar(v):
                    return v
                if v.sites() - {0}:
                    raise ParseError("site tag on an expression that already has sites", t.pos, self.text)
                return v.relabel({0: site})
            return v
        if t.kind != "name":
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, self.text)
        self.take()
        name = t.text
        if name in ("z", "m"):
            v = z if name == "z" else m
            self._site()
            return v
        if name in ("Sx", "St"):
            self.take("[")
            a = self._rational()
            self.take("]")
            site = self._site() or 0
            return (Sx if name == "Sx" else St)(a, site)
        builders = {"x": X, "t": T, "dx": Dx, "dt": Dt}
        if name not in builders:
            raise UnknownSymbol(f"unknown symbol {name!r}", t.pos, self.text)
        return builders[name](self._site() or 0)


def parse_expr(text: str) -> OperatorExpr:
    """Parse ``text`` into a normal-ordered operator."""
    return _as_op(_Parser(text).parse())
