"""Nonlinear changes of basis that make the brackets classical.

Each map sends a new generator to a word in the old generators and their
group-likes. Maps are applied at the realized level: the old realized
generators are substituted into the words and the results compared, in
normal form, with the stored realizations of the mapped cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hopf import CheckResult, check_coassociativity, check_homomorphism, realize_tensor, delta
from .opalg import Dt, Dx, OperatorExpr, St, Sx, commutator, expand_in_z, identity, zero
from .opalg.scalar import m, z
from .tables import (
    SIGMA,
    TAU,
    CASES,
    casimir,
    coproduct,
    realize,
    realization,
    relation_rhs,
)
from .words import AbstractExpr, GroupLike, gen, glike, one

__all__ = [
    "BasisMap",
    "MAPS",
    "apply_map",
    "map_soundness",
    "verify_classicalization",
    "verify_casimir_map",
    "verify_coproduct_transport",
    "verify_sl2_coproduct",
    "sl2_classical_limit",
]

half = Fraction(1, 2)
M, P, H, K, D, C = (gen(n) for n in "MPHKDC")
Dp = D + half * M


@dataclass
class BasisMap:
    """New generator -> word in the old basis."""

    name: str
    source: str          # case whose realization the words are evaluated in
    target: str          # case holding the expected realization
    images: dict
    step: object         # sigma or tau, as a scalar in z


def _space_images() -> dict:
    return {
        "H": H,
        "P": (one() - glike("P", -1)) * (1 / z),
        "M": M,
        "D": D + half * (one() - glike("P", 1)),
        "K": -2 * K - z * (M * glike("P", 1)),
        "C": (C - (z / 2) * (K * Dp) + (z / 2) * (K * glike("P", 1))
              - (z**2 / 8) * (M * glike("P", 2))),
    }


def _time_images() -> dict:
    return {
        "H": (one() - glike("H", -4)) * (1 / (4 * z)),
        "P": P,
        "M": M,
        "D": D + 2 * (one() - glike("H", 4)),
        "K": -2 * K - 8 * z * (P * glike("H", 4)),
        "C": C + z * (Dp * Dp) - 4 * z * (D * glike("H", 4)),
    }


def _sl2_images() -> dict:
    new_h = (one() - glike("H", -4)) * (1 / (4 * z))
    new_d = D + 2 * (one() - glike("H", 4))
    new_c = C + z * (D * D) - 4 * z * (D * glike("H", 4))
    return {"J3": -new_d, "J+": new_h, "J-": -new_c}


MAPS = {
    "space": BasisMap("space", "space", "classical-space", _space_images(), SIGMA),
    "time": BasisMap("time", "time", "classical-time", _time_images(), TAU),
    "sl2": BasisMap("sl2", "sl2-deformed", "sl2-mapped", _sl2_images(), TAU),
}


def _realize_with(expr: AbstractExpr, ops: dict) -> OperatorExpr:
    out = zero()
    for word, c in expr.terms.items():
        op = identity()
        for letter in word:
            if isinstance(letter, GroupLike):
                op = op * (Sx(letter.amount) if letter.kind == "P" else St(letter.amount))
            else:
                op = op * ops[letter]
        out = out + op.scale(c)
    return out


def apply_map(case: str) -> dict:
    """Realized new generators obtained by substituting the old realization."""
    bm = MAPS[case]
    old = realization(bm.source)
    return {g: _realize_with(img, old) for g, img in bm.images.items()}


def map_soundness(case: str) -> list[CheckResult]:
    """Mapped generators equal the stored lattice realization, one by one."""
    bm = MAPS[case]
    mapped = apply_map(case)
    out = []
    for g, op in mapped.items():
        r = op - realize(g, bm.target)
        out.append(CheckResult(case, "map-realization", g, len(r), r.is_zero()))
    return out


def verify_classicalization(case: str) -> list[CheckResult]:
    """Brackets of the mapped generators against the classical table."""
    bm = MAPS[case]
    mapped = apply_map(case)
    gens = CASES[bm.target].generators
    out = []
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            rhs = _realize_with(relation_rhs(bm.target, a, b), mapped)
            r = commutator(mapped[a], mapped[b]) - rhs
            out.append(CheckResult(case, "classicalization", f"{a},{b}", len(r), r.is_zero()))
    return out


def substitute_words(expr: AbstractExpr, images: dict) -> AbstractExpr:
    """Replace each generator letter by its image; group-likes stay."""
    out = AbstractExpr()
    for word, c in expr.terms.items():
        piece = one()
        for letter in word:
            if isinstance(letter, GroupLike):
                piece = piece * AbstractExpr({(letter,): 1})
            else:
                piece = piece * images[letter]
        out = out + piece * c
    return out


def discrete_equation(case: str) -> OperatorExpr:
    """The lattice Schrodinger operator written from shifts and steps.

    x lattice:  ((T_x - 1)/sigma)^2 - 2 m dt   with T_x = exp(sigma dx)
    t lattice:  dx^2 - 2 m (T_t - 1)/tau       with T_t = exp(tau dt)
    """
    one_ = identity()
    if case == "space":
        t_x = Sx(SIGMA / z)  # sigma = -z: one step back in units of z
        diff = (t_x - one_) / SIGMA
        return diff * diff - 2 * m * Dt()
    if case == "time":
        t_t = St(TAU / z)
        return Dx() * Dx() - 2 * m * (t_t - one_) / TAU
    raise KeyError(case)


def verify_casimir_map(case: str) -> list[CheckResult]:
    """The map carries the classical Casimir to the deformed one.

    Checked at word level (exact equality of abstract expressions) and at
    the realized level against the lattice Schrodinger operator.
    """
    if case not in ("space", "time"):
        raise KeyError(case)
    bm = MAPS[case]
    pulled = substitute_words(casimir(bm.target), bm.images)
    words_ok = pulled == casimir(case)
    realized = _realize_with(casimir(bm.target), apply_map(case))
    r = realized - discrete_equation(case)
    r2 = realize("M", bm.target) - realize("M", case)
    return [
        CheckResult(case, "casimir-words", "E", 0 if words_ok else 1, words_ok),
        CheckResult(case, "casimir-equation", "E", len(r), r.is_zero()),
        CheckResult(case, "casimir-central", "M", len(r2), r2.is_zero()),
    ]


def verify_coproduct_transport(case: str) -> list[CheckResult]:
    """Stored mapped coproducts equal the old coproduct of the map's image.

    Both sides are two-site operators: ``Delta_old(image(X))`` realized in
    the old realization and ``Delta_new(X)`` realized in the new one.
    """
    bm = MAPS[case]
    out = []
    for g, img in bm.images.items():
        old_side = realize_tensor(delta(img, bm.source), bm.source)
        new_side = realize_tensor(coproduct(bm.target, g), bm.target)
        r = old_side - new_side
        out.append(CheckResult(case, "coproduct-transport", g, len(r), r.is_zero()))
    return out


def verify_sl2_coproduct() -> list[CheckResult]:
    """Homomorphism and coassociativity of the transformed jordanian coproduct."""
    case = "sl2-mapped"
    gens = CASES[case].generators
    out = []
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            out.append(check_homomorphism(case, a, b))
    out.extend(check_coassociativity(case, g) for g in gens)
    out.extend(verify_coproduct_transport("sl2"))
    return out


def sl2_classical_limit() -> list[CheckResult]:
    """At z -> 0 every transformed coproduct becomes cocommutative."""
    out = []
    for g in CASES["sl2-mapped"].generators:
        op = realize_tensor(coproduct("sl2-mapped", g), "sl2-mapped")
        lead = expand_in_z(op, 0)[0]
        r = lead - lead.relabel({1: 2, 2: 1})
        out.append(CheckResult("sl2-mapped", "cocommutative-limit", g, len(r), r.is_zero()))
    return out
