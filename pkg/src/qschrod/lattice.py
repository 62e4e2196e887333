"""Numeric checks of the discrete Schrodinger equations on uniform grids.

Three families are supported:

``bk``  discrete x (step sigma), continuous t
``ci``  continuous x, discrete t (step tau)
``za``  both directions discrete

A continuous direction is still sampled, at its nominal step, so that a
grid function is always a finite array. Shifts along a discrete
direction read neighbouring samples (stencils); derivatives, and shifts
along a continuous direction, need the closed form of the function.
Only interior points reached by every shift are ever evaluated.

Polynomial data with rational steps stay in exact ``Fraction``
arithmetic. Exponential data are evaluated in double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Protocol

import numpy as np

from .opalg import OperatorExpr
from .opalg.polyfunc import PolyFunction, apply_to_polynomial
from .opalg.scalar import FIELD, evaluate_scalar
from .tables import realize, realized_casimir, symmetry_factor

__all__ = [
    "FAMILIES",
    "Grid",
    "ExpPoly",
    "HeatKernel",
    "GridFunction",
    "NumTerm",
    "NumOperator",
    "DispersionSolution",
    "StencilOutOfRange",
    "ClosedFormRequired",
    "family_operator",
    "numeric_operator",
    "residual",
    "apply_symmetry",
    "symmetry_factor_check",
    "polynomial_kernel_rank",
    "heat_kernel_convergence",
]

# family -> (x discrete, t discrete, cases whose realizations act on it)
FAMILIES = {
    "bk": (True, False, ("space", "classical-space")),
    "ci": (False, True, ("time", "classical-time")),
    "za": (True, True, ()),
}


class StencilOutOfRange(ValueError):
    """A shift leaves the grid or falls between grid points."""


class ClosedFormRequired(ValueError):
    """An analytic derivative or off-grid shift was needed on sampled data."""


def _exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def _num(v):
    """Fractions stay exact; everything else becomes float/complex."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, complex):
        return v
    return float(v)


@dataclass(frozen=True)
class Grid:
    nx: int
    nt: int
    sigma: object
    tau: object
    x0: object = Fraction(0)
    t0: object = Fraction(0)

    def __post_init__(self):
        if self.nx < 8 or self.nt < 8:
            raise ValueError("grids need at least 8 points per direction")
        if self.sigma <= 0 or self.tau <= 0:
            raise ValueError("steps must be positive")
        for name in ("sigma", "tau", "x0", "t0"):
            object.__setattr__(self, name, _num(getattr(self, name)))

    def x(self, j: int):
        return self.x0 + j * self.sigma

    def t(self, n: int):
        return self.t0 + n * self.tau

    @property
    def exact(self) -> bool:
        return _exact(self.sigma, self.tau, self.x0, self.t0)


# --- closed forms ----------------------------------------------------------

class ClosedForm(Protocol):
    def evaluate(self, x, t): ...
    def derive(self, ix: int, it: int) -> "ClosedForm": ...
    def shift(self, hx, ht) -> "ClosedForm": ...
    def times(self, xp: int, tp: int, c) -> "ClosedForm": ...


def _exp(v):
    if v == 0:
        return Fraction(1)
    return cmath.exp(v) if isinstance(v, complex) else math.exp(v)


class ExpPoly:
    """Sum of ``c * x^p * t^q * exp(alpha x + beta t)``."""

    def __init__(self, terms: dict | None = None):
        out: dict = {}
        for key, c in (terms or {}).items():
            out[key] = out.get(key, 0) + c
        self.terms = {k: v for k, v in out.items() if v != 0}

    @classmethod
    def monomial(cls, p=0, q=0, c=1, alpha=0, beta=0) -> "ExpPoly":
        return cls({(p, q, _num(alpha), _num(beta)): _num(c)})

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ExpPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ExpPoly":
        return ExpPoly({k: c * v for k, v in self.terms.items()})

    @property
    def is_polynomial(self) -> bool:
        return all(a == 0 and b == 0 for _, _, a, b in self.terms)

    def evaluate(self, x, t):
        s = 0
        for (p, q, a, b), c in self.terms.items():
            s += c * x**p * t**q * _exp(a * x + b * t)
        return s

    def derive(self, ix: int, it: int) -> "ExpPoly":
        cur = self
        for _ in range(ix):
            nxt: dict = {}
            for (p, q, a, b), c in cur.terms.items():
                if p:
                    k = (p - 1, q, a, b)
                    nxt[k] = nxt.get(k, 0) + c * p
                if a != 0:
                    nxt[(p, q, a, b)] = nxt.get((p, q, a, b), 0) + c * a
            cur = ExpPoly(nxt)
        for _ in range(it):
            nxt = {}
            for (p, q, a, b), c in cur.terms.items():
                if q:
                    k = (p, q - 1, a, b)
                    nxt[k] = nxt.get(k, 0) + c * q
                if b != 0:
                    nxt[(p, q, a, b)] = nxt.get((p, q, a, b), 0) + c * b
            cur = ExpPoly(nxt)
        return cur

    def shift(self, hx, ht) -> "ExpPoly":
        """f(x + hx, t + ht)."""
        out: dict = {}
        for (p, q, a, b), c in self.terms.items():
            e = c * _exp(a * hx + b * ht)
            for i in range(p + 1):
                for k in range(q + 1):
                    key = (i, k, a, b)
                    out[key] = out.get(key, 0) + e * comb(p, i) * hx ** (p - i) * comb(q, k) * ht ** (q - k)
        return ExpPoly(out)

    def times(self, xp: int, tp: int, c) -> "ExpPoly":
        return ExpPoly({(p + xp, q + tp, a, b): c * v for (p, q, a, b), v in self.terms.items()})


@dataclass(frozen=True)
class HeatKernel:
    """``t^(-1/2) exp(-m x^2 / (2t))``, with at most one t-derivative."""

    m: float
    order: int = 0

    def evaluate(self, x, t):
        base = t ** -0.5 * math.exp(-self.m * x * x / (2 * t))
        if self.order == 0:
            return base
        return base * (-1 / (2 * t) + self.m * x * x / (2 * t * t))

    def derive(self, ix: int, it: int) -> "HeatKernel":
        if ix or self.order + it > 1:
            raise NotImplementedError("only the first t-derivative is provided")
        return HeatKernel(self.m, self.order + it)

    def shift(self, hx, ht):
        raise NotImplementedError

    def times(self, xp, tp, c):
        raise NotImplementedError


# --- grid functions --------------------------------------------------------

@dataclass(frozen=True)
class GridFunction:
    """Samples on the index box ``[j0, j0+nj) x [n0, n0+nn)`` of a grid."""

    grid: Grid
    values: np.ndarray
    j0: int = 0
    n0: int = 0
    closed: object = None

    @classmethod
    def sample(cls, grid: Grid, closed, j0=0, n0=0, nj=None, nn=None) -> "GridFunction":
        nj = grid.nx - j0 if nj is None else nj
        nn = grid.nt - n0 if nn is None else nn
        vals = np.empty((nj, nn), dtype=object)
        for a in range(nj):
            for b in range(nn):
                vals[a, b] = closed.evaluate(grid.x(j0 + a), grid.t(n0 + b))
        return cls(grid, vals, j0, n0, closed)

    @property
    def box(self) -> tuple:
        nj, nn = self.values.shape
        return (self.j0, self.j0 + nj, self.n0, self.n0 + nn)

    def restrict(self, box: tuple) -> "GridFunction":
        j0, j1, n0, n1 = box
        a, b = j0 - self.j0, n0 - self.n0
        if a < 0 or b < 0 or j1 > self.box[1] or n1 > self.box[3]:
            raise StencilOutOfRange(f"box {box} is not inside {self.box}")
        return GridFunction(self.grid, self.values[a:a + j1 - j0, b:b + n1 - n0], j0, n0, self.closed)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        box = _intersect(self.box, other.box)
        a, b = self.restrict(box), other.restrict(box)
        closed = None
        if isinstance(self.closed, ExpPoly) and isinstance(other.closed, ExpPoly):
            closed = self.closed - other.closed
        return GridFunction(self.grid, a.values - b.values, box[0], box[2], closed)

    def max_abs(self):
        return max((abs(v) for v in self.values.flat), default=0)

    def consistent(self, tol=1e-9, scale: "GridFunction | None" = None) -> bool:
        """Spot check of the closed form against the samples.

        Float comparisons are relative to ``scale`` (termwise magnitudes)
        when given, else to the value itself.
        """
        if self.closed is None:
            return True
        nj, nn = self.values.shape
        picks = {(0, 0), (nj - 1, nn - 1), (nj // 2, nn // 2), (0, nn - 1), (nj - 1, 0)}
        for a, b in picks:
            ref = self.closed.evaluate(self.grid.x(self.j0 + a), self.grid.t(self.n0 + b))
            got = self.values[a, b]
            if _exact(ref, got):
                if ref != got:
                    return False
            else:
                mag = abs(ref) if scale is None else float(scale.values[a, b])
                if abs(ref - got) > tol * max(1.0, mag):
                    return False
        return True

    def dump(self) -> str:
        """One record per point: ``j n x t value``."""
        lines = []
        nj, nn = self.values.shape
        for a in range(nj):
            for b in range(nn):
                j, n = self.j0 + a, self.n0 + b
                lines.append(f"{j} {n} {self.grid.x(j)} {self.grid.t(n)} {self.values[a, b]}")
        return "\n".join(lines)


def _intersect(a: tuple, b: tuple) -> tuple:
    box = (max(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), min(a[3], b[3]))
    if box[0] >= box[1] or box[2] >= box[3]:
        raise StencilOutOfRange("no interior points left")
    return box


# --- numeric operators -----------------------------------------------------

@dataclass(frozen=True)
class NumTerm:
    """``c * x^xp * t^tp * shift(hx, ht) * dx^ix * dt^it``."""

    c: object
    xp: int = 0
    tp: int = 0
    hx: object = 0
    ht: object = 0
    ix: int = 0
    it: int = 0


@dataclass(frozen=True)
class NumOperator:
    family: str
    terms: tuple

    def apply_closed(self, f: ExpPoly) -> ExpPoly:
        out = ExpPoly()
        for tm in self.terms:
            out = out + f.derive(tm.ix, tm.it).shift(tm.hx, tm.ht).times(tm.xp, tm.tp, tm.c)
        return out


def numeric_operator(op: OperatorExpr, family: str, z, mval) -> NumOperator:
    """Bind ``z`` and ``m`` in a single-site operator."""
    vals = {"z": _num(z), "m": _num(mval)}
    terms = []
    for key, coeff in op.terms.items():
        c = evaluate_scalar(coeff, vals)
        if not key:
            terms.append(NumTerm(c))
            continue
        if len(key) != 1:
            raise ValueError("only single-site operators act on grid functions")
        _, xp, tp, sx, st, ix, it = key[0]
        terms.append(NumTerm(c, xp, tp, _num(sx) * vals["z"], _num(st) * vals["z"], ix, it))
    return NumOperator(family, tuple(terms))


def _z_of(family: str, grid: Grid):
    if family == "bk":
        return -grid.sigma
    if family == "ci":
        return -grid.tau / 4
    raise KeyError(f"family {family!r} has no deformation parameter")


def family_operator(family: str, grid: Grid, mval=Fraction(1, 2)) -> NumOperator:
    """The discrete Schrodinger operator of a family, bound to the grid steps."""
    if family in ("bk", "ci"):
        case = FAMILIES[family][2][0]
        return numeric_operator(realized_casimir(case), family, _z_of(family, grid), mval)
    if family == "za":
        s, tau, mv = grid.sigma, grid.tau, _num(mval)
        return NumOperator("za", (
            NumTerm(1 / s**2), NumTerm(-2 / s**2, hx=s), NumTerm(1 / s**2, hx=2 * s),
            NumTerm(2 * mv / tau), NumTerm(-2 * mv / tau, ht=tau),
        ))
    raise KeyError(family)


def _offset(h, step, discrete: bool):
    if not discrete or h == 0:
        return 0 if h == 0 else None
    r = h / step
    k = round(r)
    if abs(r - k) > 1e-9:
        raise StencilOutOfRange(f"shift {h} is not a multiple of the step {step}")
    return int(k)


def apply(op: NumOperator, phi: GridFunction, check: bool = True) -> tuple[GridFunction, GridFunction]:
    """``(op phi, termwise absolute sum)`` on the largest reachable box."""
    xd, td, _ = FAMILIES[op.family]
    g = phi.grid
    plans = []
    box = phi.box
    for tm in op.terms:
        dj = _offset(tm.hx, g.sigma, xd)
        dn = _offset(tm.ht, g.tau, td)
        needs_closed = tm.ix or tm.it or dj is None or dn is None
        if needs_closed and phi.closed is None:
            raise ClosedFormRequired("operator needs derivatives or off-grid shifts")
        dj, dn = dj or 0, dn or 0
        lo = phi.box
        box = _intersect(box, (lo[0] - dj, lo[1] - dj, lo[2] - dn, lo[3] - dn))
        plans.append((tm, dj, dn, needs_closed))
    nj, nn = box[1] - box[0], box[3] - box[2]
    total = np.zeros((nj, nn), dtype=object)
    scale = np.zeros((nj, nn), dtype=object)
    for tm, dj, dn, needs_closed in plans:
        if needs_closed:
            src = phi.closed.derive(tm.ix, tm.it)
            hx = 0 if (xd and dj) or tm.hx == 0 else tm.hx
            ht = 0 if (td and dn) or tm.ht == 0 else tm.ht
            if hx or ht:
                src = src.shift(hx, ht)
            base = GridFunction.sample(g, src, phi.j0, phi.n0, *phi.values.shape)
        else:
            base = phi
        a0, b0 = box[0] + dj - base.j0, box[2] + dn - base.n0
        block = base.values[a0:a0 + nj, b0:b0 + nn]
        for a in range(nj):
            xa = g.x(box[0] + a) ** tm.xp
            for b in range(nn):
                v = tm.c * xa * g.t(box[2] + b) ** tm.tp * block[a, b]
                total[a, b] += v
                scale[a, b] += abs(v)
    closed = op.apply_closed(phi.closed) if isinstance(phi.closed, ExpPoly) else None
    out = GridFunction(g, total, box[0], box[2], closed)
    mags = GridFunction(g, scale, box[0], box[2])
    if check and not out.consistent(scale=mags):
        raise AssertionError("stencil evaluation disagrees with the closed form")
    return out, mags


@dataclass(frozen=True)
class ResidualReport:
    max_abs: object
    scale: object
    relative: float

    def ok(self, tol) -> bool:
        if _exact(self.max_abs):
            return self.max_abs == 0 or self.relative <= tol
        return self.relative <= tol


def _report(value: GridFunction, scale: GridFunction) -> ResidualReport:
    mx = value.max_abs()
    sc = scale.max_abs()
    rel = 0.0 if mx == 0 else float(mx) / float(sc) if sc else math.inf
    return ResidualReport(mx, sc, rel)


def residual(family: str, phi: GridFunction, mval=Fraction(1, 2)) -> ResidualReport:
    """Max-norm of ``E phi`` over the interior, with a termwise scale."""
    return _report(*apply(family_operator(family, phi.grid, mval), phi))


def _case_for(family: str, case: str | None) -> str:
    cases = FAMILIES[family][2]
    if not cases:
        raise KeyError(f"no symmetry realization acts on family {family!r}")
    case = case or cases[0]
    if case not in cases:
        raise KeyError(f"case {case!r} does not act on family {family!r}")
    return case


def apply_symmetry(family: str, gen_name: str, phi: GridFunction, case: str | None = None,
                   mval=Fraction(1, 2)) -> GridFunction:
    """``X phi`` for the realized generator ``X`` of a matching case."""
    case = _case_for(family, case)
    op = numeric_operator(realize(gen_name, case), family, _z_of(family, phi.grid), mval)
    return apply(op, phi)[0]


@dataclass(frozen=True)
class FactorCheck:
    family: str
    case: str
    generator: str
    max_abs: object
    relative: float
    passed: bool


def symmetry_factor_check(family: str, gen_name: str, phi: GridFunction, case: str | None = None,
                          mval=Fraction(1, 2), tol=1e-9) -> FactorCheck:
    """``E(X phi) - X(E phi) - L(E phi) = 0`` pointwise, for any probe ``phi``."""
    case = _case_for(family, case)
    zval = _z_of(family, phi.grid)
    e = family_operator(family, phi.grid, mval)
    x = numeric_operator(realize(gen_name, case), family, zval, mval)
    lam = numeric_operator(symmetry_factor(case, gen_name), family, zval, mval)
    xphi, _ = apply(x, phi)
    ephi, _ = apply(e, phi)
    a, sa = apply(e, xphi)
    b, sb = apply(x, ephi)
    c, sc = apply(lam, ephi)
    diff = (a - b) - c
    # scale: largest termwise magnitude of the three pieces on the common box
    tot = 0.0
    for mag in (sa, sb, sc):
        sub = mag.restrict(_intersect(diff.box, mag.box))
        tot = max(tot, float(sub.max_abs()))
    mx = diff.max_abs()
    rel = 0.0 if mx == 0 else float(mx) / tot if tot else math.inf
    passed = (mx == 0) if _exact(mx) else rel <= tol
    return FactorCheck(family, case, gen_name, mx, rel, passed)


# --- solution families -----------------------------------------------------

@dataclass(frozen=True)
class DispersionSolution:
    """Exponential solution with per-step growth factors.

    bk: ``mu^(x/sigma) e^(omega t)``,  ((mu-1)/sigma)^2 = 2 m omega
    ci: ``e^(k x) nu^(t/tau)``,        k^2 = 2 m (nu-1)/tau
    za: ``mu^(x/sigma) nu^(t/tau)``,   ((mu-1)/sigma)^2 = 2 m (nu-1)/tau
    """

    family: str
    sigma: object
    tau: object
    m: object
    mu: object = None
    nu: object = None
    omega: object = None
    k: object = None

    @classmethod
    def bk(cls, mu, sigma, tau, m=Fraction(1, 2)):
        mu, sigma, m = _num(mu), _num(sigma), _num(m)
        return cls("bk", sigma, _num(tau), m, mu=mu, omega=((mu - 1) / sigma) ** 2 / (2 * m))

    @classmethod
    def ci(cls, k, sigma, tau, m=Fraction(1, 2)):
        k, tau, m = _num(k), _num(tau), _num(m)
        return cls("ci", _num(sigma), tau, m, nu=1 + tau * k**2 / (2 * m), k=k)

    @classmethod
    def za(cls, mu, sigma, tau, m=Fraction(1, 2)):
        mu, sigma, tau, m = _num(mu), _num(sigma), _num(tau), _num(m)
        return cls("za", sigma, tau, m, mu=mu, nu=1 + tau * ((mu - 1) / sigma) ** 2 / (2 * m))

    def dispersion_gap(self):
        if self.family == "bk":
            return ((self.mu - 1) / self.sigma) ** 2 - 2 * self.m * self.omega
        if self.family == "ci":
            return self.k**2 - 2 * self.m * (self.nu - 1) / self.tau
        return ((self.mu - 1) / self.sigma) ** 2 - 2 * self.m * (self.nu - 1) / self.tau

    def closed_form(self) -> ExpPoly:
        if self.family == "bk":
            return ExpPoly.monomial(alpha=math.log(self.mu) / self.sigma, beta=float(self.omega))
        if self.family == "ci":
            return ExpPoly.monomial(alpha=float(self.k), beta=math.log(self.nu) / self.tau)
        return ExpPoly.monomial(alpha=math.log(self.mu) / self.sigma, beta=math.log(self.nu) / self.tau)

    def on(self, grid: Grid) -> GridFunction:
        return GridFunction.sample(grid, self.closed_form())


# --- polynomial kernels ----------------------------------------------------

def _monomials(degree: int) -> list[tuple[int, int]]:
    return [(p, q) for d in range(degree + 1) for p in range(d + 1) for q in [d - p]]


def _symbolic_operator(family: str) -> OperatorExpr:
    if family not in ("bk", "ci"):
        raise KeyError(family)
    return realized_casimir(FAMILIES[family][2][0])


def polynomial_kernel_rank(family: str, grid: Grid, degree: int = 3, mval=Fraction(1, 2)) -> dict:
    """Rank of E on polynomials of total degree <= ``degree``, two ways.

    Numeric: SVD rank of the sampled images on the interior of ``grid``.
    Symbolic: exact rank over Q(z, m) of the coefficient matrix of the
    images, computed with the polynomial action oracle.
    """
    from sympy.polys.matrices import DomainMatrix

    mons = _monomials(degree)
    e = family_operator(family, grid, mval)
    cols = []
    for p, q in mons:
        f = ExpPoly.monomial(p, q)
        img, _ = apply(e, GridFunction.sample(grid, f))
        cols.append([float(v) for v in img.values.flat])
    numeric = int(np.linalg.matrix_rank(np.array(cols, dtype=float).T))

    op = _symbolic_operator(family)
    images = [apply_to_polynomial(op, PolyFunction.monomial(p, q)) for p, q in mons]
    rows = sorted({k for img in images for k in img.terms})
    dom = FIELD.to_domain()
    mat = [[dom.convert(img.terms.get(r, FIELD.zero)) for img in images] for r in rows]
    symbolic = DomainMatrix(mat, (len(rows), len(mons)), dom).rank() if rows else 0
    return {"monomials": len(mons), "numeric": numeric, "symbolic": symbolic,
            "kernel": len(mons) - symbolic}


def heat_kernel_convergence(sigmas, m=0.5, nx=16, nt=8, x0=-0.3, t0=1.0) -> list[tuple[float, float]]:
    """Residual of the continuum heat kernel against the bk equation.

    Returns ``(sigma, |E phi|)`` pairs at the fixed point ``(x0, t0)``; the
    residual should fall linearly with sigma. A fixed point is used
    because the sampled box shrinks with sigma.
    """
    out = []
    for s in sigmas:
        g = Grid(nx, nt, float(s), 0.05, x0, t0)
        phi = GridFunction.sample(g, HeatKernel(float(m)))
        op = family_operator("bk", g, Fraction(m).limit_denominator())
        val, _ = apply(op, phi, check=False)
        if val.box[0] != 0 or val.box[2] != 0:
            raise StencilOutOfRange("the fixed point left the interior")
        out.append((float(s), abs(float(val.values[0, 0]))))
    return out
