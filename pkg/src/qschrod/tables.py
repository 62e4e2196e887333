"""Generator sets, realizations, commutation and coproduct tables.

Six cases are registered:

``space``           deformation by a space-like step, realized with
                    continuous t and shifts in x
``time``            deformation by a time-like step, shifts in t
``classical-space`` the space case after the nonlinear change of basis;
                    classical brackets, deformed coproduct
``classical-time``  the same for the time case
``sl2-deformed``    the jordanian sl(2) subalgebra {H, D, C} at M = 0
``sl2-mapped``      its image {J3, J+, J-} with classical sl(2) brackets

The mapped cases use the same generator letters as the deformed ones;
the case name says which basis a letter belongs to. Lattice steps are
tied to the one deformation parameter: sigma = -z, tau = -4z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .opalg import Dt, Dx, OperatorExpr, St, Sx, T, X, identity, zero
from .opalg.scalar import m, z
from .words import AbstractExpr, GroupLike, TensorExpr, gen, glike, one, tensor

__all__ = [
    "CASES",
    "SCHRODINGER",
    "Case",
    "UnknownGenerator",
    "UnknownPair",
    "get_case",
    "realize",
    "realize_word",
    "relation_rhs",
    "relation_pairs",
    "casimir",
    "realized_casimir",
    "symmetry_factor",
    "coproduct",
    "manifest",
    "SIGMA",
    "TAU",
]

SCHRODINGER = ("M", "P", "H", "K", "D", "C")
SL2_OLD = ("H", "D", "C")
SL2_NEW = ("J3", "J+", "J-")

half = Fraction(1, 2)
SIGMA = -z
TAU = -4 * z


class UnknownGenerator(KeyError):
    pass


class UnknownPair(KeyError):
    pass


@dataclass
class Case:
    name: str
    generators: tuple
    relations: dict
    coproducts: dict
    build_realization: Callable[[], dict]
    casimir: AbstractExpr | None = None
    build_symmetry_factors: Callable[[], dict] | None = None
    anchors: dict = field(default_factory=dict)


# --- abstract data ------------------------------------------------------

M, P, H, K, D, C = (gen(n) for n in SCHRODINGER)
Dp = D + half * M
J3, Jp, Jm = gen("J3"), gen("J+"), gen("J-")


def eP(a) -> AbstractExpr:
    return glike("P", a)


def eH(a) -> AbstractExpr:
    return glike("H", a)


def I() -> AbstractExpr:  # noqa: E743
    return one()


def _prim(x: AbstractExpr) -> TensorExpr:
    return tensor(I(), x) + tensor(x, I())


def _full(table: dict, gens: tuple) -> dict:
    """Complete a relation table with zero entries for omitted pairs."""
    out = {}
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if (a, b) in table:
                out[(a, b)] = table[(a, b)]
            elif (b, a) in table:
                out[(a, b)] = -table[(b, a)]
            else:
                out[(a, b)] = AbstractExpr()
    return out


SPACE_RELATIONS = _full({
    ("D", "P"): (I() - eP(1)) * (1 / z),
    ("D", "K"): K,
    ("K", "P"): M * eP(1),
    ("D", "H"): -2 * H,
    ("D", "C"): 2 * C - (z / 2) * (K * Dp),
    ("H", "C"): half * (I() + eP(-1)) * Dp - half * M + z * (K * H),
    ("K", "C"): -(z / 2) * (K * K),
    ("P", "C"): -half * (I() + eP(1)) * K - (z / 2) * (eP(1) * M * Dp),
    ("K", "H"): (I() - eP(-1)) * (1 / z),
}, SCHRODINGER)

TIME_RELATIONS = _full({
    ("D", "P"): -P,
    ("D", "K"): K,
    ("K", "P"): M,
    ("D", "H"): (I() - eH(4)) * (1 / (2 * z)),
    ("D", "C"): 2 * C + 2 * z * (Dp * Dp),
    ("H", "C"): Dp - half * (M * eH(4)),
    ("K", "C"): z * (Dp * K + K * Dp),
    ("P", "C"): -K - z * (Dp * P + P * Dp),
    ("K", "H"): eH(4) * P,
}, SCHRODINGER)

CLASSICAL_RELATIONS = _full({
    ("D", "P"): -P,
    ("D", "K"): K,
    ("K", "P"): -2 * M,
    ("D", "H"): -2 * H,
    ("D", "C"): 2 * C,
    ("H", "C"): D,
    ("P", "C"): half * K,
    ("K", "H"): -2 * P,
}, SCHRODINGER)

SL2_DEFORMED_RELATIONS = _full({
    ("D", "H"): (I() - eH(4)) * (1 / (2 * z)),
    ("D", "C"): 2 * C + 2 * z * (D * D),
    ("H", "C"): D,
}, SL2_OLD)

SL2_MAPPED_RELATIONS = _full({
    ("J3", "J+"): 2 * Jp,
    ("J3", "J-"): -2 * Jm,
    ("J+", "J-"): J3,
}, SL2_NEW)


SPACE_COPRODUCT = {
    "M": _prim(M),
    "P": _prim(P),
    "H": tensor(I(), H) + tensor(H, eP(-2)),
    "K": tensor(I(), K) + tensor(K, eP(1)) - z * tensor(Dp, eP(1) * M),
    "D": tensor(I(), D) + tensor(D, eP(1)) + half * tensor(M, eP(1) - I()),
    "C": (tensor(I(), C) + tensor(C, eP(2)) + (z / 2) * tensor(K, eP(1) * Dp)
          - (z / 2) * tensor(Dp, eP(1) * (K + z * (Dp * M)))),
}

TIME_COPRODUCT = {
    "M": _prim(M),
    "H": _prim(H),
    "P": tensor(I(), P) + tensor(P, eH(-2)),
    "K": tensor(I(), K) + tensor(K, eH(2)) - 2 * z * tensor(Dp, eH(4) * P),
    "D": tensor(I(), D) + tensor(D, eH(4)) + half * tensor(M, eH(4) - I()),
    "C": tensor(I(), C) + tensor(C, eH(4)) - z * tensor(Dp, eH(4) * M),
}

# (1 + sigma*P)^a is stored as exp(-a z P), (1 + tau*H)^a as exp(-4a z H)
CLASSICAL_SPACE_COPRODUCT = {
    "M": _prim(M),
    "P": _prim(P) + SIGMA * tensor(P, P),
    "H": tensor(I(), H) + tensor(H, eP(-2)),
    "K": tensor(I(), K) + tensor(K, eP(1)) - 2 * SIGMA * tensor(Dp, M * eP(1)),
    "D": tensor(I(), D) + tensor(D, eP(1)) - half * tensor(M, SIGMA * (P * eP(1))),
    "C": (tensor(I(), C) + tensor(C, eP(2)) - (SIGMA / 2) * tensor(Dp, eP(1) * K)
          + (SIGMA**2 / 2) * tensor(Dp * (Dp - I()), M * eP(2))),
}

CLASSICAL_TIME_COPRODUCT = {
    "M": _prim(M),
    "H": _prim(H) + TAU * tensor(H, H),
    "P": tensor(I(), P) + tensor(P, eH(-2)),
    "K": tensor(I(), K) + tensor(K, eH(2)) - TAU * tensor(Dp, P * eH(4)),
    "D": tensor(I(), D) + tensor(D, eH(4)) - half * tensor(M, TAU * (H * eH(4))),
    "C": (tensor(I(), C) + tensor(C, eH(4)) - (TAU / 2) * tensor(Dp, eH(4) * D)
          + (TAU / 4) * tensor(Dp * (Dp - 2 * I()), TAU * (H * eH(8)))),
}

SL2_DEFORMED_COPRODUCT = {
    "H": _prim(H),
    "D": tensor(I(), D) + tensor(D, eH(4)),
    "C": tensor(I(), C) + tensor(C, eH(4)),
}

SL2_MAPPED_COPRODUCT = {
    "J+": _prim(Jp) + TAU * tensor(Jp, Jp),
    "J3": tensor(I(), J3) + tensor(J3, eH(4)),
    "J-": (tensor(I(), Jm) + tensor(Jm, eH(4)) + (TAU / 2) * tensor(J3, eH(4) * J3)
           - (TAU / 4) * tensor(J3 * (J3 + 2 * I()), TAU * (Jp * eH(8)))),
}

SPACE_CASIMIR = ((I() - eP(-1)) * (1 / z)) ** 2 - 2 * (M * H)
TIME_CASIMIR = P * P - 2 * (M * ((I() - eH(-4)) * (1 / (4 * z))))
CLASSICAL_CASIMIR = P * P - 2 * (M * H)


# --- realizations -------------------------------------------------------

def _space_realization() -> dict:
    x, t, dx, dt = X(), T(), Dx(), Dt()
    one_ = identity()
    return {
        "P": dx,
        "H": dt,
        "M": one_ * m,
        "K": -t * (one_ - Sx(-1)) / z - m * x * Sx(1),
        "D": 2 * t * dt + x * (Sx(1) - one_) / z + one_ * half,
        "C": (t * t * dt * Sx(-1)
              + t * x * ((Sx(1) - Sx(-1)) / (2 * z) - z * m * dt * Sx(1))
              + (m / 2) * x * x * Sx(1)
              - t * (one_ - 3 * Sx(-1) + m * (one_ - Sx(-1))) / 4
              + (z * m * (1 - m) / 4) * x * Sx(1)),
    }


def _time_realization() -> dict:
    x, t, dx, dt = X(), T(), Dx(), Dt()
    one_ = identity()
    b = m / 2 - 2
    return {
        "H": dt,
        "P": dx,
        "M": one_ * m,
        "K": -(t + 4 * z) * St(4) * dx - m * x,
        "D": 2 * (t + 4 * z) * (St(4) - one_) / (4 * z) + x * dx + one_ * half,
        "C": ((t * t - 4 * z * b * t) * (St(4) - one_) / (4 * z)
              + t * x * dx + t * half + (m / 2) * x * x
              - 4 * z * (b + 1) * St(4)
              - z * x * x * dx * dx - 2 * z * (b + 1) * x * dx
              - one_ * (z * (b + half) ** 2)),
    }


def _classical_space_realization() -> dict:
    x, t, dt = X(), T(), Dt()
    one_ = identity()
    delta_x = (one_ - Sx(-1)) / z  # (T_x - 1)/sigma with T_x = Sx[-1]
    t_inv = Sx(1)
    return {
        "P": delta_x,
        "H": dt,
        "M": one_ * m,
        "K": 2 * t * delta_x + m * (2 * x + one_ * SIGMA) * t_inv,
        "D": 2 * t * dt + x * delta_x * t_inv - t_inv * half + one_,
        "C": (t * t * dt + t * x * delta_x * t_inv + (m / 2) * x * x * t_inv * t_inv
              + t * (one_ - t_inv * half) - (m * SIGMA**2 / 8) * t_inv * t_inv),
    }


def _classical_time_realization() -> dict:
    x, t, dx = X(), T(), Dx()
    one_ = identity()
    delta_t = (one_ - St(-4)) / (4 * z)  # (T_t - 1)/tau with T_t = St[-4]
    t_inv = St(4)
    return {
        "H": delta_t,
        "P": dx,
        "M": one_ * m,
        "K": 2 * t * dx * t_inv + 2 * m * x,
        "D": 2 * t * delta_t * t_inv + x * dx + one_ * half,
        "C": (t * t * delta_t * t_inv * t_inv + t * x * dx * t_inv + (m / 2) * x * x
              + t * (t_inv * t_inv - t_inv * half)),
    }


def _at_m_zero(ops: dict, keep) -> dict:
    from .opalg import substitute

    return {k: substitute(ops[k], {"m": 0}) for k in keep}


def _sl2_deformed_realization() -> dict:
    return _at_m_zero(realization("time"), SL2_OLD)


def _sl2_mapped_realization() -> dict:
    ops = _at_m_zero(realization("classical-time"), ("D", "H", "C"))
    return {"J3": -ops["D"], "J+": ops["H"], "J-": -ops["C"]}


def _galilei_zero(extra: dict) -> dict:
    out = {g: zero() for g in ("M", "P", "H", "K")}
    out.update(extra)
    return out


def _space_factors() -> dict:
    x, t = X(), T()
    return _galilei_zero({
        "D": identity() * 2,
        "C": t * (Sx(-1) + identity()) - z * m * x * Sx(1),
    })


def _time_factors() -> dict:
    x, t, dx = X(), T(), Dx()
    return _galilei_zero({
        "D": identity() * 2,
        "C": 2 * (t + z * ((1 - m) * identity() - 2 * x * dx)),
    })


def _classical_space_factors() -> dict:
    return _galilei_zero({"D": identity() * 2, "C": 2 * T()})


def _classical_time_factors() -> dict:
    return _galilei_zero({"D": identity() * 2, "C": 2 * T() * St(4)})


CASES: dict[str, Case] = {
    "space": Case(
        "space", SCHRODINGER, SPACE_RELATIONS, SPACE_COPRODUCT, _space_realization,
        SPACE_CASIMIR, _space_factors,
        {"relations": "space-deformed commutation rules",
         "coproducts": "space-deformed coproduct",
         "realization": "differential-difference realization, shifts in x",
         "casimir": "deformed Galilei Casimir (space)",
         "factors": "symmetry relations of the space-discrete equation"}),
    "time": Case(
        "time", SCHRODINGER, TIME_RELATIONS, TIME_COPRODUCT, _time_realization,
        TIME_CASIMIR, _time_factors,
        {"relations": "time-deformed commutation rules",
         "coproducts": "time-deformed coproduct",
         "realization": "differential-difference realization, shifts in t",
         "casimir": "deformed Galilei Casimir (time)",
         "factors": "symmetry relations of the time-discrete equation"}),
    "classical-space": Case(
        "classical-space", SCHRODINGER, CLASSICAL_RELATIONS, CLASSICAL_SPACE_COPRODUCT,
        _classical_space_realization, CLASSICAL_CASIMIR, _classical_space_factors,
        {"relations": "classical Schrodinger brackets",
         "coproducts": "mapped space coproduct",
         "realization": "lattice symmetry operators, uniform x grid",
         "casimir": "non-deformed Galilei Casimir",
         "factors": "symmetry relations of the x-lattice equation"}),
    "classical-time": Case(
        "classical-time", SCHRODINGER, CLASSICAL_RELATIONS, CLASSICAL_TIME_COPRODUCT,
        _classical_time_realization, CLASSICAL_CASIMIR, _classical_time_factors,
        {"relations": "classical Schrodinger brackets",
         "coproducts": "mapped time coproduct",
         "realization": "lattice symmetry operators, uniform t grid",
         "casimir": "non-deformed Galilei Casimir",
         "factors": "symmetry relations of the t-lattice equation"}),
    "sl2-deformed": Case(
        "sl2-deformed", SL2_OLD, SL2_DEFORMED_RELATIONS, SL2_DEFORMED_COPRODUCT,
        _sl2_deformed_realization,
        anchors={"relations": "jordanian sl(2) commutation rules",
                 "coproducts": "jordanian sl(2) coproduct",
                 "realization": "time realization at M = 0"}),
    "sl2-mapped": Case(
        "sl2-mapped", SL2_NEW, SL2_MAPPED_RELATIONS, SL2_MAPPED_COPRODUCT,
        _sl2_mapped_realization,
        anchors={"relations": "classical sl(2) brackets",
                 "coproducts": "transformed jordanian coproduct",
                 "realization": "t-lattice operators at M = 0"}),
}


def get_case(name: str) -> Case:
    try:
        return CASES[name]
    except KeyError:
        raise KeyError(f"unknown case {name!r}; expected one of {sorted(CASES)}") from None


@lru_cache(maxsize=None)
def realization(case: str) -> dict:
    return get_case(case).build_realization()


def realize(gen_name: str, case: str) -> OperatorExpr:
    ops = realization(case)
    if gen_name not in ops:
        raise UnknownGenerator(f"{gen_name!r} is not a generator of case {case!r}")
    return ops[gen_name]


def _realize_letter(letter, case: str) -> OperatorExpr:
    if isinstance(letter, GroupLike):
        return Sx(letter.amount) if letter.kind == "P" else St(letter.amount)
    return realize(letter, case)


@lru_cache(maxsize=4096)
def _realize_word(word: tuple, case: str) -> OperatorExpr:
    if not word:
        return identity()
    if len(word) == 1:
        return _realize_letter(word[0], case)
    return _realize_word(word[:-1], case) * _realize_letter(word[-1], case)


def realize_word(expr: AbstractExpr, case: str) -> OperatorExpr:
    """Realize an abstract expression, multiplying letters left to right."""
    out = zero()
    for word, c in expr.terms.items():
        out = out + _realize_word(word, case).scale(c)
    return out


def relation_pairs(case: str) -> list[tuple]:
    return list(get_case(case).relations)


def relation_rhs(case: str, a: str, b: str) -> AbstractExpr:
    rel = get_case(case).relations
    if (a, b) in rel:
        return rel[(a, b)]
    if (b, a) in rel:
        return -rel[(b, a)]
    raise UnknownPair(f"({a}, {b}) is not a generator pair of case {case!r}")


def casimir(case: str) -> AbstractExpr:
    c = get_case(case).casimir
    if c is None:
        raise KeyError(f"case {case!r} has no Galilei Casimir")
    return c


@lru_cache(maxsize=None)
def realized_casimir(case: str) -> OperatorExpr:
    return realize_word(casimir(case), case)


@lru_cache(maxsize=None)
def _factors(case: str) -> dict:
    builder = get_case(case).build_symmetry_factors
    if builder is None:
        raise KeyError(f"case {case!r} has no symmetry factors")
    return builder()


def symmetry_factor(case: str, gen_name: str) -> OperatorExpr:
    """The operator L with [E, X] = L E for the realized Casimir E."""
    factors = _factors(case)
    if gen_name not in factors:
        raise UnknownGenerator(f"{gen_name!r} is not a generator of case {case!r}")
    return factors[gen_name]


def coproduct(case: str, gen_name: str) -> TensorExpr:
    table = get_case(case).coproducts
    if gen_name not in table:
        raise UnknownGenerator(f"{gen_name!r} has no coproduct in case {case!r}")
    return table[gen_name]


def manifest() -> list[dict]:
    """Every table entry with its source label, in a stable order."""
    rows = []
    for name, case in CASES.items():
        for g in case.generators:
            rows.append({"case": name, "table": "realization", "entry": g,
                         "anchor": case.anchors["realization"]})
        for (a, b), rhs in case.relations.items():
            rows.append({"case": name, "table": "relations", "entry": f"[{a},{b}]",
                         "anchor": case.anchors["relations"], "value": str(rhs)})
        for g, cop in case.coproducts.items():
            rows.append({"case": name, "table": "coproducts", "entry": f"Delta({g})",
                         "anchor": case.anchors["coproducts"], "value": str(cop)})
        if case.casimir is not None:
            rows.append({"case": name, "table": "casimir", "entry": "E",
                         "anchor": case.anchors["casimir"], "value": str(case.casimir)})
            for g in case.generators:
                rows.append({"case": name, "table": "symmetry-factors", "entry": f"[E,{g}]",
                             "anchor": case.anchors["factors"]})
    return rows
