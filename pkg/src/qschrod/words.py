"""Formal words in abstract generators, and tensors of them.

Words are stored verbatim: products concatenate letters and nothing is
ever reordered. Letters are generator names (``"K"``, ``"J+"``, ...) or
:class:`GroupLike` exponentials ``exp(a z P)`` / ``exp(a z H)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .opalg.scalar import FIELD, Scalar, format_scalar, to_scalar

__all__ = ["GroupLike", "AbstractExpr", "TensorExpr", "gen", "glike", "one", "tensor"]


@dataclass(frozen=True, order=True)
class GroupLike:
    """``exp(amount * z * kind)`` for kind in {"P", "H"}."""

    kind: str
    amount: Fraction

    def __post_init__(self):
        if self.kind not in ("P", "H"):
            raise ValueError(f"group-like kind must be P or H, got {self.kind!r}")
        object.__setattr__(self, "amount", Fraction(self.amount))

    def __str__(self):
        a = self.amount
        amt = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return f"e^({amt}z{self.kind})"


Letter = Union[str, GroupLike]
Word = tuple


def _letter_str(letter: Letter) -> str:
    return str(letter)


def _word_str(word: Word) -> str:
    return "*".join(_letter_str(l) for l in word) if word else "1"


def _word_sort_key(word: Word):
    return (len(word), [(isinstance(l, GroupLike), str(l)) for l in word])


class AbstractExpr:
    """Linear combination of words with scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        out: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            w = _simplify_word(tuple(w))
            c = to_scalar(c)
            out[w] = out.get(w, FIELD.zero) + c
        self.terms = {w: c for w, c in out.items() if c != 0}

    def __add__(self, other) -> "AbstractExpr":
        other = _coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, FIELD.zero) + c
        return AbstractExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return AbstractExpr({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, AbstractExpr):
            c = to_scalar(other)
            return AbstractExpr({w: c * v for w, v in self.terms.items()})
        out: dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, FIELD.zero) + c1 * c2
        return AbstractExpr(out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        return self * (1 / to_scalar(other))

    def __pow__(self, n: int):
        out = one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AbstractExpr):
            other = _coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator:
        return iter(sorted(self.terms.items(), key=lambda kv: _word_sort_key(kv[0])))

    def letters(self) -> set:
        return {l for w in self.terms for l in w}

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{_word_str(w)}" for w, c in self)

    __repr__ = __str__


def _simplify_word(word: Word) -> Word:
    """Merge adjacent group-likes of the same kind and drop exp(0)."""
    out: list = []
    for l in word:
        if isinstance(l, GroupLike):
            if out and isinstance(out[-1], GroupLike) and out[-1].kind == l.kind:
                merged = GroupLike(l.kind, out[-1].amount + l.amount)
                out.pop()
                if merged.amount:
                    out.append(merged)
                continue
            if not l.amount:
                continue
        out.append(l)
    return tuple(out)


def _coerce(value) -> AbstractExpr:
    if isinstance(value, AbstractExpr):
        return value
    return AbstractExpr({(): value})


def gen(name: str) -> AbstractExpr:
    return AbstractExpr({(name,): 1})


def glike(kind: str, amount) -> AbstractExpr:
    return AbstractExpr({(GroupLike(kind, Fraction(amount)),): 1})


def one() -> AbstractExpr:
    return AbstractExpr({(): 1})


class TensorExpr:
    """Linear combination of n-leg tensors of words; legs multiply leg-wise."""

    __slots__ = ("terms", "legs")

    def __init__(self, terms: Mapping[tuple, object] | None = None, legs: int = 2):
        out: dict[tuple, Scalar] = {}
        for ws, c in (terms or {}).items():
            if len(ws) != legs:
                raise ValueError(f"expected {legs} legs, got {len(ws)}")
            ws = tuple(_simplify_word(tuple(w)) for w in ws)
            out[ws] = out.get(ws, FIELD.zero) + to_scalar(c)
        self.terms = {k: c for k, c in out.items() if c != 0}
        self.legs = legs

    def __add__(self, other: "TensorExpr") -> "TensorExpr":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, FIELD.zero) + c
        return TensorExpr(out, self.legs)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TensorExpr):
            c = to_scalar(other)
            return TensorExpr({k: c * v for k, v in self.terms.items()}, self.legs)
        if other.legs != self.legs:
            raise ValueError("leg counts differ")
        out: dict[tuple, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, FIELD.zero) + c1 * c2
        return TensorExpr(out, self.legs)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return isinstance(other, TensorExpr) and self.legs == other.legs and self.terms == other.terms

    def __hash__(self):
        return hash((self.legs, frozenset(self.terms.items())))

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: [_word_sort_key(w) for w in kv[0]]))

    def flip(self) -> "TensorExpr":
        """Swap the legs of a 2-leg tensor."""
        return TensorExpr({(b, a): c for (a, b), c in self.terms.items()}, 2)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            format_scalar(c) + "*" + " (x) ".join(_word_str(w) for w in ws) for ws, c in self
        )

    __repr__ = __str__


def tensor(*factors: AbstractExpr) -> TensorExpr:
    """Tensor product ``a (x) b (x) ...`` of abstract expressions."""
    out: dict[tuple, Scalar] = {(): FIELD.one}
    for f in factors:
        f = _coerce(f)
        nxt: dict[tuple, Scalar] = {}
        for k, c in out.items():
            for w, c2 in f.terms.items():
                nk = k + (w,)
                nxt[nk] = nxt.get(nk, FIELD.zero) + c * c2
        out = nxt
    return TensorExpr(out, len(factors))
