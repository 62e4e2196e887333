"""Polynomial test functions and the direct action of operators on them.

The action here is computed factor by factor from the definitions
(derivative, then shift by Taylor/binomial expansion, then multiplication)
and never calls the normal-ordering code, so it is an independent oracle
for :func:`~qschrod.opalg.operator.mul`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping

from .operator import OperatorExpr
from .scalar import FIELD, format_scalar, sadd, smul, to_scalar, z

__all__ = ["PolyFunction", "apply_to_polynomial"]

# key: tuple of (site, p, q) with p or q nonzero, sorted by site
PKey = tuple


class PolyFunction:
    """Finite sum of ``c * prod_site x_site^p t_site^q``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[PKey, object] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = to_scalar(c)
            if c != 0:
                _acc(clean, _pkey(k), c)
        self.terms = {k: c for k, c in clean.items() if c != 0}

    @classmethod
    def monomial(cls, p: int = 0, q: int = 0, coeff=1, site: int = 0) -> "PolyFunction":
        return cls({((site, p, q),): coeff})

    @classmethod
    def constant(cls, c) -> "PolyFunction":
        return cls({(): c})

    def __add__(self, other: "PolyFunction") -> "PolyFunction":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return PolyFunction(out)

    def __sub__(self, other: "PolyFunction") -> "PolyFunction":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyFunction":
        c = to_scalar(c)
        return PolyFunction({k: smul(c, v) for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, PolyFunction) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(p + q for _, p, q in k) for k in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "PolyFunction(0)"
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: kv[0]):
            mono = "*".join(
                f"{v}{'' if s == 0 else '@' + str(s)}^{e}"
                for s, p, q in k for v, e in (("x", p), ("t", q)) if e
            )
            parts.append(format_scalar(c) + (f"*{mono}" if mono else ""))
        return "PolyFunction(" + " + ".join(parts) + ")"


@lru_cache(maxsize=None)
def _const(n):
    return to_scalar(n)


def _acc(d: dict, k, c) -> None:
    d[k] = sadd(d[k], c) if k in d else c


def _pkey(k) -> PKey:
    return tuple(sorted(f for f in k if f[1] or f[2]))


def _shift_poly(exps: dict, var: int, amount) -> dict:
    """Apply ``v -> v + amount*z`` to the variable ``var`` (1 = x, 2 = t)."""
    if not amount:
        return exps
    a = to_scalar(Fraction(amount)) * z
    out: dict = {}
    for (p, q), c in exps.items():
        n = p if var == 1 else q
        for i in range(n + 1):
            piece = smul(c, smul(_const(comb(n, i)), a ** (n - i)))
            key = (i, q) if var == 1 else (p, i)
            _acc(out, key, piece)
    return out


def _act_site(factor, exps: dict) -> dict:
    _, xp, tp, sx, st, dx, dt = factor
    out: dict = {}
    # derivatives first (rightmost), one application at a time
    for _ in range(dt):
        nxt: dict = {}
        for (p, q), c in exps.items():
            if q:
                _acc(nxt, (p, q - 1), smul(c, _const(q)))
        exps = nxt
    for _ in range(dx):
        nxt = {}
        for (p, q), c in exps.items():
            if p:
                _acc(nxt, (p - 1, q), smul(c, _const(p)))
        exps = nxt
    exps = _shift_poly(exps, 2, st)
    exps = _shift_poly(exps, 1, sx)
    for (p, q), c in exps.items():
        _acc(out, (p + xp, q + tp), c)
    return out


def apply_to_polynomial(a: OperatorExpr, f: PolyFunction) -> PolyFunction:
    """Exact action of ``a`` on ``f``."""
    result: dict = {}
    for key, coeff in a.terms.items():
        for fkey, fc in f.terms.items():
            # split f's monomial into per-site exponent dicts
            parts = {s: {(p, q): FIELD.one} for s, p, q in fkey}
            for factor in key:
                s = factor[0]
                parts[s] = _act_site(factor, parts.get(s, {(0, 0): FIELD.one}))
            # recombine: product over sites of polynomials
            combos: dict = {(): smul(coeff, fc)}
            for s in sorted(parts):
                nxt: dict = {}
                for k, c in combos.items():
                    for (p, q), c2 in parts[s].items():
                        nk = k + ((s, p, q),)
                        _acc(nxt, nk, smul(c, c2))
                combos = nxt
            for k, c in combos.items():
                k = _pkey(k)
                _acc(result, k, c)
    return PolyFunction(result)
