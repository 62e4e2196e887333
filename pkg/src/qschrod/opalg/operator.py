"""Normal-ordered differential-difference operators.

A monomial on one site is ``x^p t^q Sx[a] St[b] dx^e dt^f`` where
``Sx[a] = exp(a z d/dx)`` and ``St[b] = exp(b z d/dt)``; shift amounts are
exact rationals in units of ``z``. Multi-site monomials are products of
single-site factors tagged with a site index; factors on distinct sites
commute. An :class:`OperatorExpr` maps monomial keys to nonzero scalars.

Products are reduced with the closed forms of the rewrite rules

    dx x -> x dx + 1        Sx[a] x -> (x + a z) Sx[a]

(and their ``t`` analogues), applied to whole powers at once.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import comb
from typing import Iterable, Mapping, Union

from sympy import QQ

from .scalar import (
    FIELD,
    frac,
    sadd,
    smul,
    Scalar,
    format_scalar,
    series_in,
    substitute_scalar,
    to_fraction,
    to_scalar,
)

__all__ = [
    "OperatorExpr",
    "PoleAtZeroError",
    "SiteFactor",
    "identity",
    "zero",
    "const",
    "X",
    "T",
    "Dx",
    "Dt",
    "Sx",
    "St",
    "normalize",
    "commutator",
    "expand_in_z",
    "substitute",
]

RING = FIELD.ring

# (site, xPow, tPow, sx, st, dxPow, dtPow)
SiteFactor = tuple
Key = tuple  # tuple of SiteFactor sorted by site; () is the identity


class PoleAtZeroError(ValueError):
    """A coefficient has a pole at z = 0, so the z -> 0 expansion diverges."""


def _amount(a) -> Union[int, Fraction]:
    if hasattr(a, "numer"):
        if not (a.numer.is_ground and a.denom.is_ground):
            raise ValueError(f"shift amount must be a rational number, got {a}")
        a = to_fraction(a.numer.LC) / to_fraction(a.denom.LC) if a.numer else 0
    q = Fraction(a)
    return q.numerator if q.denominator == 1 else q


def _is_trivial(f: SiteFactor) -> bool:
    return not any(f[1:])


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@lru_cache(maxsize=None)
def _commute(shift, d: int, p: int) -> tuple:
    """Reorder ``S[shift] d^d v^p`` into ``sum rat z^zp v^i S[shift] d^(d-k)``.

    Returns tuples ``(rat, zpow, i, k)``.
    """
    out: dict[tuple, Fraction] = {}
    for k in range(min(d, p) + 1):
        lead = comb(d, k) * _falling(p, k)
        j = p - k
        if shift == 0:
            out[(0, j, k)] = out.get((0, j, k), 0) + Fraction(lead)
            continue
        for i in range(j + 1):
            zp = j - i
            key = (zp, i, k)
            out[key] = out.get(key, 0) + lead * comb(j, i) * Fraction(shift) ** zp
    return tuple((QQ(r.numerator, r.denominator), zp, i, k) for (zp, i, k), r in out.items() if r)


@lru_cache(maxsize=None)
def _local_product(f1: SiteFactor, f2: SiteFactor) -> tuple:
    site, xp1, tp1, sx1, st1, dx1, dt1 = f1
    _, xp2, tp2, sx2, st2, dx2, dt2 = f2
    sx, st = _amount(sx1 + sx2), _amount(st1 + st2)
    out = []
    for rx, zx, i, k in _commute(sx1, dx1, xp2):
        for rt, zt, j, l in _commute(st1, dt1, tp2):
            f = (site, xp1 + i, tp1 + j, sx, st, dx1 - k + dx2, dt1 - l + dt2)
            out.append((f, rx * rt, zx + zt))
    return tuple(out)


@lru_cache(maxsize=200_000)
def _key_product(k1: Key, k2: Key) -> tuple:
    """All ``(key, rat, zpow)`` contributions of the monomial product k1*k2."""
    sites1 = {f[0]: f for f in k1}
    sites2 = {f[0]: f for f in k2}
    fixed = []
    shared = []
    for s in sorted(set(sites1) | set(sites2)):
        if s in sites1 and s in sites2:
            shared.append(_local_product(sites1[s], sites2[s]))
        else:
            fixed.append(sites1.get(s) or sites2[s])
    acc: dict[tuple, object] = {}
    for combo in cartesian(*shared):
        rat = QQ(1)
        zpow = 0
        factors = list(fixed)
        for f, r, zp in combo:
            rat *= r
            zpow += zp
            if not _is_trivial(f):
                factors.append(f)
        key = tuple(sorted(factors))
        acc[(key, zpow)] = acc.get((key, zpow), QQ(0)) + rat
    return tuple((key, r, zp) for (key, zp), r in acc.items() if r)


def _finalize(acc: dict) -> dict:
    terms = {}
    for key, slots in acc.items():
        items = [(den, num) for den, num in slots.items() if num]
        if not items:
            continue
        if len(items) > 1 and all(len(den) == 1 for den, _ in items):
            # bring monomial denominators to their lcm, then cancel once
            exps = [next(iter(den.keys())) for den, _ in items]
            top = tuple(max(col) for col in zip(*exps))
            big = FIELD.ring.from_dict({top: FIELD.ring.domain.one})
            num = FIELD.ring.zero
            for (den, part), e in zip(items, exps):
                shift = tuple(a - b for a, b in zip(top, e))
                num += part.mul_term((shift, 1 / den[e]))
            total = frac(num, big)
        else:
            total = None
            for den, num in items:
                piece = frac(num, den)
                total = piece if total is None else sadd(total, piece)
        if total:
            terms[key] = total
    return terms


class OperatorExpr:
    """Immutable normal-form linear combination of operator monomials."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Key, object] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = to_scalar(c)
            if c != 0:
                clean[k] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, terms: dict) -> "OperatorExpr":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("OperatorExpr is immutable")

    # --- construction -------------------------------------------------
    @classmethod
    def monomial(cls, coeff=1, *, site: int = 0, x: int = 0, t: int = 0,
                 sx=0, st=0, dx: int = 0, dt: int = 0) -> "OperatorExpr":
        f = (site, x, t, _amount(sx), _amount(st), dx, dt)
        if min(x, t, dx, dt) < 0:
            raise ValueError("powers must be non-negative")
        key = () if _is_trivial(f) else (f,)
        return cls({key: coeff})

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else sadd(s, c)
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return OperatorExpr._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def scale(self, c) -> "OperatorExpr":
        c = to_scalar(c)
        if c == 0:
            return OperatorExpr._raw({})
        return OperatorExpr._raw({k: smul(c, v) for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, OperatorExpr):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, OperatorExpr):
            raise TypeError("division by an operator is undefined")
        return self.scale(1 / to_scalar(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # --- comparison ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, OperatorExpr):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # --- inspection ---------------------------------------------------
    def ordered_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def sites(self) -> set[int]:
        return {f[0] for k in self.terms for f in k}

    def max_orders(self) -> tuple[int, int]:
        dx = max((f[5] for k in self.terms for f in k), default=0)
        dt = max((f[6] for k in self.terms for f in k), default=0)
        return dx, dt

    def has_shifts(self) -> bool:
        return any(f[3] or f[4] for k in self.terms for f in k)

    def on_site(self, site: int) -> "OperatorExpr":
        """Move a single-site operator onto ``site``."""
        if len(self.sites()) > 1:
            raise ValueError("on_site expects a single-site operator")
        return OperatorExpr._raw({
            tuple((site,) + f[1:] for f in k): c for k, c in self.terms.items()
        })

    def relabel(self, mapping: Mapping[int, int]) -> "OperatorExpr":
        """Rename sites; sites missing from ``mapping`` keep their index."""
        out = {}
        for k, c in self.terms.items():
            nk = tuple(sorted((mapping.get(f[0], f[0]),) + f[1:] for f in k))
            out[nk] = c
        return OperatorExpr._raw(out)

    def map_coefficients(self, fn) -> "OperatorExpr":
        return OperatorExpr({k: fn(c) for k, c in self.terms.items()})

    def __repr__(self):
        return f"OperatorExpr({self})"

    def __str__(self):
        return format_operator(self)


def _coerce(value) -> OperatorExpr:
    if isinstance(value, OperatorExpr):
        return value
    if isinstance(value, (int, Fraction)) or hasattr(value, "numer"):
        return OperatorExpr({(): value})
    raise TypeError(f"cannot coerce {type(value).__name__} to OperatorExpr")


def _sort_key(key: Key):
    return tuple(
        (f[0], -(f[1] + f[2]), -f[1], -f[2], Fraction(f[3]), Fraction(f[4]), f[5], f[6])
        for f in key
    )


def mul(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    """Normal-form product ``a * b``."""
    acc: dict[Key, dict] = {}
    b_items = [(k, c.numer, c.denom) for k, c in b.terms.items()]
    for k1, c1 in a.terms.items():
        n1, d1 = c1.numer, c1.denom
        for k2, n2, d2 in b_items:
            num = n1 * n2
            den = d1 * d2
            for key, rat, zpow in _key_product(k1, k2):
                slot = acc.setdefault(key, {})
                piece = num.mul_term(((zpow, 0), rat))
                prev = slot.get(den)
                slot[den] = piece if prev is None else prev + piece
    return OperatorExpr._raw(_finalize(acc))


def commutator(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return mul(a, b) - mul(b, a)


# --- atoms --------------------------------------------------------------

def identity() -> OperatorExpr:
    return OperatorExpr._raw({(): FIELD.one})


def zero() -> OperatorExpr:
    return OperatorExpr._raw({})


def const(c) -> OperatorExpr:
    return OperatorExpr({(): c})


def X(site: int = 0) -> OperatorExpr:
    return OperatorExpr.monomial(site=site, x=1)


def T(site: int = 0) -> OperatorExpr:
    return OperatorExpr.monomial(site=site, t=1)


def Dx(site: int = 0) -> OperatorExpr:
    return OperatorExpr.monomial(site=site, dx=1)


def Dt(site: int = 0) -> OperatorExpr:
    return OperatorExpr.monomial(site=site, dt=1)


def Sx(a, site: int = 0) -> OperatorExpr:
    """``exp(a z d/dx)``."""
    return OperatorExpr.monomial(site=site, sx=a)


def St(b, site: int = 0) -> OperatorExpr:
    """``exp(b z d/dt)``."""
    return OperatorExpr.monomial(site=site, st=b)


def normalize(factors: Iterable) -> OperatorExpr:
    """Normal form of the ordered product of ``factors``.

    Factors may be operators or scalars.
    """
    out = identity()
    for f in factors:
        out = out * f if isinstance(f, OperatorExpr) else out.scale(f)
    return out


# --- z-expansion and substitution --------------------------------------

def expand_in_z(a: OperatorExpr, order: int) -> list[OperatorExpr]:
    """Coefficients of ``z^0 .. z^order`` as shift-free operators.

    Shifts expand as ``Sx[s] = sum (s z dx)^n / n!``. Poles of individual
    coefficients may cancel between terms; any that survive raise
    :class:`PoleAtZeroError`.
    """
    acc: dict[int, dict] = {}
    for key, c in a.terms.items():
        cs = series_in(c, "z", order)
        lowest = min(cs, default=0)
        # shift expansion of each site factor, deep enough to cancel poles
        depth = order - min(lowest, 0)
        per_site = []
        for f in key:
            site, xp, tp, sx, st, dx, dt = f
            options = []
            for i in range(depth + 1 if sx else 1):
                for j in range(depth + 1 - i if st else 1):
                    r = Fraction(sx) ** i / _fact(i) * Fraction(st) ** j / _fact(j)
                    options.append((i + j, r, (site, xp, tp, 0, 0, dx + i, dt + j)))
            per_site.append(options)
        for combo in cartesian(*per_site):
            zp = sum(o[0] for o in combo)
            r = Fraction(1)
            for o in combo:
                r *= o[1]
            k = tuple(sorted(o[2] for o in combo if not _is_trivial(o[2])))
            for p, cp in cs.items():
                power = zp + p
                if power > order:
                    continue
                slot = acc.setdefault(power, {})
                slot[k] = slot.get(k, FIELD.zero) + cp * to_scalar(r)
    for power in sorted(acc):
        if power < 0 and not OperatorExpr(acc[power]).is_zero():
            raise PoleAtZeroError(f"coefficient of z^{power} does not vanish")
    return [OperatorExpr(acc.get(p, {})) for p in range(order + 1)]


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def substitute(a: OperatorExpr, bindings: Mapping[str, object]) -> OperatorExpr:
    """Bind symbols in every coefficient.

    ``z`` may only be bound to 0, which also collapses every shift to the
    identity; any other value would change what a shift monomial means.
    """
    if "z" in bindings:
        if to_scalar(bindings["z"]) != 0:
            raise ValueError("z can only be bound to 0; shifts are measured in units of z")
    terms: dict[Key, Scalar] = {}
    for key, c in a.terms.items():
        new_c = substitute_scalar(c, bindings)
        if "z" in bindings:
            key = tuple(sorted(f[:3] + (0, 0) + f[5:] for f in key
                               if not _is_trivial(f[:3] + (0, 0) + f[5:])))
        terms[key] = terms.get(key, FIELD.zero) + new_c
    return OperatorExpr(terms)


# --- canonical text -----------------------------------------------------

def _format_amount(a) -> str:
    q = Fraction(a)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_factor(f: SiteFactor, multi_site: bool) -> list[str]:
    site, xp, tp, sx, st, dx, dt = f
    tag = f"@{site}" if multi_site or site else ""
    parts = []

    def power(name, e):
        if e == 1:
            parts.append(f"{name}{tag}")
        elif e:
            parts.append(f"{name}{tag}^{e}")

    power("x", xp)
    power("t", tp)
    if sx:
        parts.append(f"Sx[{_format_amount(sx)}]{tag}")
    if st:
        parts.append(f"St[{_format_amount(st)}]{tag}")
    power("dx", dx)
    power("dt", dt)
    return parts


def format_operator(a: OperatorExpr) -> str:
    if not a.terms:
        return "0"
    multi = len(a.sites()) > 1
    out = []
    for key, c in a.ordered_terms():
        factors = [p for f in key for p in format_factor(f, multi)]
        text = format_scalar(c)
        if factors:
            text += " * " + "*".join(factors)
        out.append(text)
    return " + ".join(out)
