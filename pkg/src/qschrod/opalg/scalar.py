"""Exact scalar coefficients: rational functions over QQ in formal symbols.

Scalars are elements of a sympy ``FracField``. Numerator and denominator
are kept coprime with a normalized leading coefficient, so ``==`` on two
scalars is structural and exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping, Union

from sympy import QQ
from sympy.polys.fields import FracElement, FracField, field

__all__ = [
    "FIELD",
    "z",
    "m",
    "Scalar",
    "DivisionByZero",
    "make_field",
    "to_scalar",
    "to_fraction",
    "substitute_scalar",
    "evaluate_scalar",
    "format_scalar",
    "format_poly",
    "series_in",
    "frac",
    "sadd",
    "smul",
]

Scalar = FracElement
Number = Union[int, Fraction]

#: Coefficient field for every operator computation: QQ(z, m).
FIELD, z, m = field("z,m", QQ)


class DivisionByZero(ZeroDivisionError):
    """A substitution or evaluation annihilated a denominator."""


# --- fast canonical fractions ------------------------------------------------
#
# Nearly every denominator met in practice is a monomial (powers of z). For
# those, the canonical form that FracField.new produces can be written down
# without a polynomial gcd: clear coefficient denominators, divide out the
# common monomial and integer content, and make the denominator's leading
# coefficient positive. Anything else goes through FracField.new.

def _is_monomial(p) -> bool:
    return len(p) == 1


def frac(num, den, fld: FracField = FIELD) -> Scalar:
    """Canonical ``num/den``; identical to ``fld.new(num, den)``."""
    if not _is_monomial(den):
        return fld.new(num, den)
    if not num:
        return fld.zero
    ring = fld.ring
    ((dm, dc),) = den.items()
    cq = 1
    for c in num.values():
        cq = lcm(cq, int(c.denominator))
    ints = {mon: int(c.numerator) * (cq // int(c.denominator)) for mon, c in num.items()}
    cp, gc = int(dc.denominator), int(dc.numerator)
    content = abs(gc)
    low = list(dm)
    for mon, c in ints.items():
        content = gcd(content, c)
        low = [min(a, b) for a, b in zip(low, mon)]
    g2 = gcd(cp, cq)
    cp, cq = cp // g2, cq // g2
    sign = -1 if gc < 0 else 1
    dom = ring.domain
    p = {tuple(a - b for a, b in zip(mon, low)): dom(sign * cp * (c // content)) for mon, c in ints.items()}
    q = {tuple(a - b for a, b in zip(dm, low)): dom(sign * cq * (gc // content))}
    return fld.raw_new(ring.from_dict(p), ring.from_dict(q))


def _monomial_quotient(big, small):
    """Monomial ``big/small`` as a ring term, both monomial polynomials."""
    ((bm, bc),) = big.items()
    ((sm, sc),) = small.items()
    return (tuple(a - b for a, b in zip(bm, sm)), bc / sc)


def sadd(a: Scalar, b: Scalar) -> Scalar:
    """``a + b`` with the monomial-denominator fast path."""
    if not b:
        return a
    if not a:
        return b
    da, db = a.denom, b.denom
    if not (_is_monomial(da) and _is_monomial(db)):
        return a + b
    if da == db:
        return frac(a.numer + b.numer, da, a.field)
    ((ma, _),) = da.items()
    ((mb, _),) = db.items()
    ring = a.field.ring
    big = ring.from_dict({tuple(max(x, y) for x, y in zip(ma, mb)): ring.domain.one})
    num = a.numer.mul_term(_monomial_quotient(big, da)) + b.numer.mul_term(_monomial_quotient(big, db))
    return frac(num, big, a.field)


def smul(a: Scalar, b: Scalar) -> Scalar:
    """``a * b`` with the monomial-denominator fast path."""
    if not a or not b:
        return a.field.zero
    if _is_monomial(a.denom) and _is_monomial(b.denom):
        return frac(a.numer * b.numer, a.denom * b.denom, a.field)
    return a * b


@lru_cache(maxsize=None)
def make_field(names: str) -> tuple:
    """Return ``(field, *generators)`` for a comma-separated symbol list."""
    return field(names, QQ)


def to_scalar(value, fld: FracField = FIELD) -> Scalar:
    if isinstance(value, FracElement):
        if value.field is fld:
            return value
        # re-embed by symbol name
        return _rebuild(value, fld)
    if isinstance(value, Fraction):
        return fld(QQ(value.numerator, value.denominator))
    return fld(value)


def _rebuild(value: FracElement, fld: FracField) -> Scalar:
    names = [str(s) for s in fld.symbols]
    gens = dict(zip(names, fld.gens))
    src = [str(s) for s in value.field.symbols]

    def conv(poly):
        out = fld.zero
        for monom, coeff in poly.terms():
            term = fld(coeff)
            for name, e in zip(src, monom):
                if e:
                    if name not in gens:
                        raise ValueError(f"symbol {name!r} not in target field")
                    term = term * gens[name] ** e
            out = out + term
        return out

    return conv(value.numer) / conv(value.denom)


def to_fraction(c) -> Fraction:
    """Convert a ground-domain coefficient (mpq, int, Fraction) to Fraction."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.numerator), int(c.denominator))


def is_constant(s: Scalar) -> bool:
    return s.numer.is_ground and s.denom.is_ground


def scalar_symbols(s: Scalar) -> set[str]:
    names = [str(v) for v in s.field.symbols]
    used = set()
    for poly in (s.numer, s.denom):
        for monom in poly.monoms():
            used.update(n for n, e in zip(names, monom) if e)
    return used


def _eval_poly(poly, values: list, zero, one):
    total = zero
    for monom, coeff in poly.terms():
        term = one * to_fraction(coeff)
        for v, e in zip(values, monom):
            if e:
                term = term * v**e
        total = total + term
    return total


def substitute_scalar(s: Scalar, bindings: Mapping[str, object]) -> Scalar:
    """Replace symbols by numbers or scalars of the same field.

    Raises :class:`DivisionByZero` when the substituted denominator is 0.
    """
    fld = s.field
    values = []
    for sym, gen in zip(fld.symbols, fld.gens):
        name = str(sym)
        values.append(to_scalar(bindings[name], fld) if name in bindings else gen)
    num = _eval_poly(s.numer, values, fld.zero, fld.one)
    den = _eval_poly(s.denom, values, fld.zero, fld.one)
    if den == 0:
        raise DivisionByZero(f"substitution {dict(bindings)} annihilates denominator {s.denom}")
    return num / den


def evaluate_scalar(s: Scalar, values: Mapping[str, object]):
    """Evaluate to a Python number (Fraction, float or complex).

    Every symbol occurring in ``s`` must be bound.
    """
    names = [str(v) for v in s.field.symbols]
    missing = scalar_symbols(s) - set(values)
    if missing:
        raise KeyError(f"unbound symbols {sorted(missing)}")
    vals = [values.get(n, 0) for n in names]
    num = _eval_poly(s.numer, vals, 0, 1)
    den = _eval_poly(s.denom, vals, 0, 1)
    if den == 0:
        raise DivisionByZero(f"denominator {s.denom} vanishes at {dict(values)}")
    return num / den


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(poly) -> str:
    """Print a polynomial with terms in descending lex order of exponents."""
    names = [str(v) for v in poly.ring.symbols]
    terms = sorted(poly.terms(), key=lambda t: t[0], reverse=True)
    if not terms:
        return "0"
    parts = []
    for monom, coeff in terms:
        q = to_fraction(coeff)
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        sign = "-" if q < 0 else "+"
        mag = abs(q)
        if factors:
            body = "*".join(factors) if mag == 1 else _format_rational(mag) + "*" + "*".join(factors)
        else:
            body = _format_rational(mag)
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_scalar(s: Scalar) -> str:
    """Canonical text ``(num)/(den)``; the denominator is omitted when it is 1."""
    num = f"({format_poly(s.numer)})"
    if s.denom == 1:
        return num
    return f"{num}/({format_poly(s.denom)})"


def series_in(s: Scalar, var: str, order: int) -> dict[int, Scalar]:
    """Laurent coefficients of ``s`` in ``var`` about 0, through ``order``.

    Returns ``{power: coefficient}`` with coefficients free of ``var``;
    negative powers appear when the reduced denominator vanishes at 0.
    """
    fld = s.field
    names = [str(v) for v in fld.symbols]
    idx = names.index(var)

    def split(poly) -> dict[int, Scalar]:
        out: dict[int, Scalar] = {}
        for monom, coeff in poly.terms():
            term = fld(coeff)
            for j, (g, e) in enumerate(zip(fld.gens, monom)):
                if e and j != idx:
                    term = term * g**e
            out[monom[idx]] = out.get(monom[idx], fld.zero) + term
        return out

    num = split(s.numer)
    den = split(s.denom)
    val = min(den)
    den = {k - val: v for k, v in den.items()}
    d0 = den[0]
    coeffs: list[Scalar] = []
    for k in range(order + val + 1):
        acc = num.get(k, fld.zero)
        for j in range(1, k + 1):
            if j in den:
                acc = acc - den[j] * coeffs[k - j]
        coeffs.append(acc / d0)
    return {k - val: c for k, c in enumerate(coeffs) if c != 0}
