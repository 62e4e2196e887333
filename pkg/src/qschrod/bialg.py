"""Lie bialgebra layer: r-matrices, Schouten brackets and cocommutators.

Everything is exact over QQ(z, z1, z2, lam). Bivectors and trivectors
are dense coefficient dicts indexed by basis positions; the wedge is
``a^b = a(x)b - b(x)a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .opalg.scalar import make_field, series_in, substitute_scalar, to_scalar
from .tables import coproduct as stored_coproduct
from .words import GroupLike

__all__ = [
    "BFIELD",
    "LieAlgebraData",
    "SCHRODINGER_ALGEBRA",
    "SL2_ALGEBRA",
    "Bivector",
    "DivergentLimit",
    "wedge",
    "schouten",
    "schouten_cyclic",
    "ad_invariant",
    "cocommutator",
    "cocommutator_from_r",
    "cocycle_check",
    "co_jacobi_check",
    "r_space",
    "r_time",
    "r_sl2",
    "sa_bivector",
    "classify_sa",
    "sa_limit",
    "first_order_skew",
    "first_order_consistency",
]

BFIELD, bz, z1, z2, lam = make_field("z,z1,z2,lam")
ZERO = BFIELD.zero


class DivergentLimit(ValueError):
    """The three-parameter r-matrix has no z1 -> 0 limit."""


@dataclass(frozen=True)
class LieAlgebraData:
    basis: tuple
    brackets: dict  # (i, j, k) -> c^k_ij, nonzero entries only

    @classmethod
    def from_table(cls, basis: tuple, table: dict) -> "LieAlgebraData":
        idx = {b: i for i, b in enumerate(basis)}
        c: dict = {}
        for (a, b), rhs in table.items():
            for k, v in rhs.items():
                v = to_scalar(v, BFIELD)
                c[(idx[a], idx[b], idx[k])] = c.get((idx[a], idx[b], idx[k]), ZERO) + v
                c[(idx[b], idx[a], idx[k])] = c.get((idx[b], idx[a], idx[k]), ZERO) - v
        return cls(tuple(basis), {k: v for k, v in c.items() if v != 0})

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        return self.basis.index(name)

    def c(self, i: int, j: int, k: int):
        return self.brackets.get((i, j, k), ZERO)

    def is_antisymmetric(self) -> bool:
        return all(self.c(i, j, k) == -self.c(j, i, k)
                   for i, j, k in product(range(self.dim), repeat=3))

    def jacobi_violations(self) -> list:
        n = self.dim
        bad = []
        for i, j, k, l in product(range(n), repeat=4):
            s = ZERO
            for mm in range(n):
                s += (self.c(i, j, mm) * self.c(mm, k, l) + self.c(j, k, mm) * self.c(mm, i, l)
                      + self.c(k, i, mm) * self.c(mm, j, l))
            if s != 0:
                bad.append((i, j, k, l))
        return bad


# undeformed Schrodinger brackets in the basis (M, P, H, K, D, C)
SCHRODINGER_ALGEBRA = LieAlgebraData.from_table(
    ("M", "P", "H", "K", "D", "C"),
    {
        ("D", "P"): {"P": -1},
        ("D", "K"): {"K": 1},
        ("K", "P"): {"M": 1},
        ("D", "H"): {"H": -2},
        ("D", "C"): {"C": 2},
        ("H", "C"): {"D": 1},
        ("P", "C"): {"K": -1},
        ("K", "H"): {"P": 1},
    },
)

SL2_ALGEBRA = LieAlgebraData.from_table(
    ("J3", "J+", "J-"),
    {("J3", "J+"): {"J+": 2}, ("J3", "J-"): {"J-": -2}, ("J+", "J-"): {"J3": 1}},
)


class Bivector(dict):
    """Antisymmetric r^{ij}; missing entries are zero."""

    def __init__(self, alg: LieAlgebraData, entries: dict | None = None):
        super().__init__()
        self.alg = alg
        for (i, j), v in (entries or {}).items():
            self.add(i, j, v)

    def add(self, i: int, j: int, v) -> None:
        v = to_scalar(v, BFIELD)
        if i == j:
            if v != 0:
                raise ValueError("diagonal entries of a bivector must vanish")
            return
        for a, b, s in ((i, j, v), (j, i, -v)):
            new = self.get((a, b), ZERO) + s
            if new == 0:
                self.pop((a, b), None)
            else:
                self[(a, b)] = new

    def at(self, i: int, j: int):
        return self.get((i, j), ZERO)

    def substitute(self, bindings: dict) -> "Bivector":
        out = Bivector(self.alg)
        for (i, j), v in self.items():
            if i < j:
                out.add(i, j, substitute_scalar(v, bindings))
        return out

    def __eq__(self, other):
        return isinstance(other, Bivector) and dict.__eq__(self, other)

    __hash__ = None

    def as_text(self) -> dict:
        b = self.alg.basis
        return {f"{b[i]}^{b[j]}": str(v) for (i, j), v in sorted(self.items()) if i < j}


def wedge(alg: LieAlgebraData, terms: list) -> Bivector:
    """Build sum c * a^b from ``[(c, a, b), ...]``; ``b`` may be ``"D'"``."""
    r = Bivector(alg)
    for c, a, b in terms:
        if b == "D'":
            r.add(alg.index(a), alg.index("D"), c)
            r.add(alg.index(a), alg.index("M"), to_scalar(c, BFIELD) / 2)
        else:
            r.add(alg.index(a), alg.index(b), c)
    return r


def schouten(r: Bivector) -> dict:
    """Classical Yang-Baxter obstruction [r12,r13] + [r12,r23] + [r13,r23]."""
    alg = r.alg
    n = alg.dim
    nz = list(r.items())
    out: dict = {}

    def put(key, v):
        new = out.get(key, ZERO) + v
        if new == 0:
            out.pop(key, None)
        else:
            out[key] = new

    for (a, j), raj in nz:
        for (c, k), rck in nz:
            # [r12, r13]: [e_a, e_c] (x) e_j (x) e_k
            for i in range(n):
                cc = alg.c(a, c, i)
                if cc:
                    put((i, j, k), cc * raj * rck)
    for (i, a), ria in nz:
        for (b, k), rbk in nz:
            for j in range(n):
                cc = alg.c(a, b, j)
                if cc:
                    put((i, j, k), ria * cc * rbk)
    for (i, a), ria in nz:
        for (j, b), rjb in nz:
            for k in range(n):
                cc = alg.c(a, b, k)
                if cc:
                    put((i, j, k), ria * rjb * cc)
    return out


def schouten_cyclic(r: Bivector) -> dict:
    """Cyclic form sum_lm (r^il c^j_lm r^mk + cyclic in ijk), brute force."""
    alg = r.alg
    n = alg.dim
    out = {}
    for i, j, k in product(range(n), repeat=3):
        s = ZERO
        for l, mm in product(range(n), repeat=2):
            s += (r.at(i, l) * alg.c(l, mm, j) * r.at(mm, k)
                  + r.at(j, l) * alg.c(l, mm, k) * r.at(mm, i)
                  + r.at(k, l) * alg.c(l, mm, i) * r.at(mm, j))
        if s != 0:
            out[(i, j, k)] = s
    return out


def ad_invariant(alg: LieAlgebraData, tri: dict) -> bool:
    """Whether ad_X of the trivector vanishes for every basis X."""
    n = alg.dim
    for x in range(n):
        acc: dict = {}
        for (i, j, k), v in tri.items():
            for a in range(n):
                for key, cc in (((a, j, k), alg.c(x, i, a)), ((i, a, k), alg.c(x, j, a)),
                                ((i, j, a), alg.c(x, k, a))):
                    if cc:
                        acc[key] = acc.get(key, ZERO) + cc * v
        if any(v != 0 for v in acc.values()):
            return False
    return True


def cocommutator(r: Bivector) -> dict:
    """delta(e_i) = [e_i (x) 1 + 1 (x) e_i, r] as bivector coefficients."""
    alg = r.alg
    n = alg.dim
    out = {}
    for i in range(n):
        d = {}
        for (l, k), v in r.items():
            for j in range(n):
                cc = alg.c(i, l, j)
                if cc:
                    d[(j, k)] = d.get((j, k), ZERO) + cc * v
        for (j, l), v in r.items():
            for k in range(n):
                cc = alg.c(i, l, k)
                if cc:
                    d[(j, k)] = d.get((j, k), ZERO) + cc * v
        out[i] = {key: v for key, v in d.items() if v != 0}
    return out


cocommutator_from_r = cocommutator


def _ad_on_tensor(alg: LieAlgebraData, x: int, t: dict) -> dict:
    n = alg.dim
    out: dict = {}
    for (a, b), v in t.items():
        for c in range(n):
            for key, cc in (((c, b), alg.c(x, a, c)), ((a, c), alg.c(x, b, c))):
                if cc:
                    out[key] = out.get(key, ZERO) + cc * v
    return out


def cocycle_check(alg: LieAlgebraData, delta: dict) -> bool:
    """delta([X,Y]) = X.delta(Y) - Y.delta(X) for all basis pairs."""
    n = alg.dim
    for x, y in product(range(n), repeat=2):
        lhs: dict = {}
        for k in range(n):
            cc = alg.c(x, y, k)
            if cc:
                for key, v in delta[k].items():
                    lhs[key] = lhs.get(key, ZERO) + cc * v
        rhs = _ad_on_tensor(alg, x, delta[y])
        for key, v in _ad_on_tensor(alg, y, delta[x]).items():
            rhs[key] = rhs.get(key, ZERO) - v
        keys = set(lhs) | set(rhs)
        if any(lhs.get(k, ZERO) != rhs.get(k, ZERO) for k in keys):
            return False
    return True


def co_jacobi_check(alg: LieAlgebraData, delta: dict) -> bool:
    """Jacobi identity for the dual bracket [e^j, e^k] = sum_i f_i^jk e^i."""
    n = alg.dim

    def f(i, j, k):
        return delta[i].get((j, k), ZERO)

    for j, k, mm, l in product(range(n), repeat=4):
        s = ZERO
        for i in range(n):
            s += f(i, j, k) * f(l, i, mm) + f(i, k, mm) * f(l, i, j) + f(i, mm, j) * f(l, i, k)
        if s != 0:
            return False
    return True


# --- named r-matrices ------------------------------------------------------

def r_space(zval=None) -> Bivector:
    zz = bz if zval is None else to_scalar(zval, BFIELD)
    return wedge(SCHRODINGER_ALGEBRA, [(zz, "P", "D'")])


def r_time(zval=None) -> Bivector:
    zz = bz if zval is None else to_scalar(zval, BFIELD)
    return wedge(SCHRODINGER_ALGEBRA, [(2 * zz, "H", "D'")])


def r_sl2(zval=None) -> Bivector:
    zz = bz if zval is None else to_scalar(zval, BFIELD)
    tau = -4 * zz
    return wedge(SL2_ALGEBRA, [(tau / 2, "J+", "J3")])


def sa_bivector(a=None, b=None, c=None) -> Bivector:
    """Three-parameter r-matrix with parameters (z1, z2, lam).

    Raises :class:`DivergentLimit` when ``z1`` is zero.
    """
    p1 = z1 if a is None else to_scalar(a, BFIELD)
    p2 = z2 if b is None else to_scalar(b, BFIELD)
    p3 = lam if c is None else to_scalar(c, BFIELD)
    if p1 == 0:
        raise DivergentLimit("the r-matrix has poles at z1 = 0")
    if p3 == 0 and p2 != 0:
        raise DivergentLimit("the P^H coefficient has a pole at lam = 0 unless z2 = 0")
    ph = ZERO if p2 == 0 else -2 * p1 * p2 / p3
    terms = [
        (2 * p1, "H", "D'"),
        (p2, "P", "D'"),
        (-p3, "H", "C"),
        (-p3**2 / (8 * p1), "C", "D"),
        (ph, "P", "H"),
        (p3 * p2 / (8 * p1), "K", "D"),
        (-p3 * p2 / (8 * p1) * p3 / (2 * p1), "K", "C"),
        (-3 * p3 * p2 / (8 * p1), "P", "C"),
        (p3 / 4 + 3 * p2**2 / (16 * p1), "K", "P"),
        (3 * p3 * p2 / (16 * p1) + p2**3 / (32 * p1**2), "K", "M"),
        (-(p3**2 / (16 * p1) + p3 * p2**2 / (32 * p1**2)), "M", "C"),
        (p3 / 4 + p2**2 / (16 * p1), "M", "D"),
    ]
    return wedge(SCHRODINGER_ALGEBRA, terms)


def sa_limit() -> Bivector:
    """Symbolic family with z2 -> 0 taken first, then lam -> 0."""
    r = sa_bivector()
    return r.substitute({"z2": 0}).substitute({"lam": 0})


@dataclass
class SaReport:
    triangular: bool
    schouten: dict
    ad_invariant: bool
    cocycle: bool
    co_jacobi: bool
    critical_lambda: object

    def as_dict(self, alg: LieAlgebraData = SCHRODINGER_ALGEBRA) -> dict:
        b = alg.basis
        return {
            "triangular": self.triangular,
            "schouten": {f"{b[i]}^{b[j]}^{b[k]}": str(v)
                         for (i, j, k), v in sorted(self.schouten.items()) if i < j < k},
            "adInvariant": self.ad_invariant,
            "cocycle": self.cocycle,
            "coJacobi": self.co_jacobi,
            "criticalLambda": str(self.critical_lambda),
        }


def classify_sa(a=None, b=None, c=None) -> SaReport:
    """Triangularity and coboundary checks of the three-parameter r-matrix."""
    r = sa_bivector(a, b, c)
    tri = schouten(r)
    d = cocommutator(r)
    p1 = z1 if a is None else to_scalar(a, BFIELD)
    p2 = z2 if b is None else to_scalar(b, BFIELD)
    return SaReport(
        triangular=not tri,
        schouten=tri,
        ad_invariant=ad_invariant(r.alg, tri),
        cocycle=cocycle_check(r.alg, d),
        co_jacobi=co_jacobi_check(r.alg, d),
        critical_lambda=-p2**2 / (4 * p1),
    )


# --- first-order expansion of the quantum coproducts -----------------------

# which primitive generator a group-like expands along, per case
_GROUP_LIKE_GENERATOR = {
    "space": {"P": "P", "H": "H"},
    "time": {"P": "P", "H": "H"},
    # (1 + tau J+)^(-a/4) = exp(a z H): first order a z J+
    "sl2-mapped": {"H": "J+"},
}
_ALGEBRA = {"space": SCHRODINGER_ALGEBRA, "time": SCHRODINGER_ALGEBRA, "sl2-mapped": SL2_ALGEBRA}
_R = {"space": r_space, "time": r_time, "sl2-mapped": r_sl2}


def _word_series(word: tuple, case: str) -> dict:
    """Series in z of a word, to first order: {order: {word: coeff}}."""
    series = {0: {(): Fraction(1)}}
    for letter in word:
        if isinstance(letter, GroupLike):
            g = _GROUP_LIKE_GENERATOR[case][letter.kind]
            factor = {0: {(): Fraction(1)}, 1: {(g,): letter.amount}}
        else:
            factor = {0: {(letter,): Fraction(1)}}
        nxt: dict = {}
        for o1, t1 in series.items():
            for o2, t2 in factor.items():
                if o1 + o2 > 1:
                    continue
                slot = nxt.setdefault(o1 + o2, {})
                for w1, c1 in t1.items():
                    for w2, c2 in t2.items():
                        slot[w1 + w2] = slot.get(w1 + w2, 0) + c1 * c2
        series = nxt
    return series


def first_order_skew(case: str, gen_name: str) -> tuple[dict, dict]:
    """Zeroth-order tensor and skew first-order part of Delta(X).

    Returns ``(order0, skew1)`` as dicts keyed by word pairs, with
    scalar coefficients; ``skew1`` is ``D1 - flip(D1)`` times ``z``.
    """
    t = stored_coproduct(case, gen_name)
    orders: dict = {0: {}, 1: {}}
    for (w1, w2), c in t.terms.items():
        cs = series_in(c, "z", 1)
        if any(k < 0 for k in cs):
            raise ValueError(f"coproduct coefficient {c} is singular at z = 0")
        s1, s2 = _word_series(w1, case), _word_series(w2, case)
        for oc, cv in cs.items():
            for o1, t1 in s1.items():
                for o2, t2 in s2.items():
                    total = oc + o1 + o2
                    if total > 1:
                        continue
                    for a, ca in t1.items():
                        for b, cb in t2.items():
                            key = (a, b)
                            val = to_scalar(cv, BFIELD) * to_scalar(ca * cb, BFIELD)
                            orders[total][key] = orders[total].get(key, ZERO) + val
    order0 = {k: v for k, v in orders[0].items() if v != 0}
    first = orders[1]
    skew: dict = {}
    for (a, b), v in first.items():
        skew[(a, b)] = skew.get((a, b), ZERO) + v * bz
        skew[(b, a)] = skew.get((b, a), ZERO) - v * bz
    return order0, {k: v for k, v in skew.items() if v != 0}


@dataclass
class ConsistencyResult:
    case: str
    generator: str
    passed: bool
    detail: str = ""


def first_order_consistency(case: str) -> list[ConsistencyResult]:
    """Skew first order of every quantum coproduct against delta from r."""
    alg = _ALGEBRA[case]
    delta = cocommutator(_R[case]())
    out = []
    for i, g in enumerate(alg.basis):
        order0, skew = first_order_skew(case, g)
        expected0 = {((g,), ()): BFIELD.one, ((), (g,)): BFIELD.one}
        if order0 != expected0:
            out.append(ConsistencyResult(case, g, False, f"zeroth order {order0}"))
            continue
        bad = [k for k in skew if len(k[0]) != 1 or len(k[1]) != 1]
        if bad:
            out.append(ConsistencyResult(case, g, False, f"not in g^g: {bad}"))
            continue
        got = {(alg.index(a[0]), alg.index(b[0])): v for (a, b), v in skew.items()}
        ok = got == delta[i]
        out.append(ConsistencyResult(case, g, ok, "" if ok else f"{got} != {delta[i]}"))
    return out
