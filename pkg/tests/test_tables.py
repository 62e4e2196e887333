from fractions import Fraction

import pytest

from qschrod.opalg import Dx, St, Sx, T, X, commutator, const, identity, m, z
from qschrod.tables import (
    CASES,
    UnknownGenerator,
    UnknownPair,
    casimir,
    coproduct,
    manifest,
    realize,
    realize_word,
    realized_casimir,
    relation_pairs,
    relation_rhs,
    symmetry_factor,
)
from qschrod.words import GroupLike, TensorExpr, gen, glike, one

half = Fraction(1, 2)
M, P, H, K, D, C = (gen(n) for n in "MPHKDC")
Dp = D + half * M


def test_realize_examples():
    assert realize("P", "space") == Dx()
    assert realize("M", "time") == const(m)
    expected = -(T() * (identity() - Sx(-1))).scale(1 / z) - (X() * Sx(1)).scale(m)
    assert realize("K", "space") == expected


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        realize("Q", "space")
    with pytest.raises(UnknownGenerator):
        coproduct("sl2-mapped", "K")


def test_relation_rhs_examples():
    assert relation_rhs("space", "K", "H") == (one() - glike("P", -1)) * (1 / z)
    assert relation_rhs("time", "K", "C") == z * (Dp * K + K * Dp)
    for g in "PHKDC":
        assert relation_rhs("classical-space", "M", g).is_zero()


def test_relation_rhs_is_antisymmetric():
    assert relation_rhs("space", "H", "K") == -relation_rhs("space", "K", "H")


def test_unknown_pair():
    with pytest.raises(UnknownPair):
        relation_rhs("space", "K", "J+")


def test_casimir_words():
    assert casimir("space") == ((one() - glike("P", -1)) * (1 / z)) ** 2 - 2 * (M * H)
    assert casimir("classical-space") == P * P - 2 * (M * H)
    assert casimir("time") == P * P - 2 * (M * ((one() - glike("H", -4)) * (1 / (4 * z))))


def test_symmetry_factor_examples():
    assert symmetry_factor("space", "D") == const(2)
    assert symmetry_factor("classical-space", "C") == T().scale(2)
    assert symmetry_factor("classical-time", "C") == (T() * St(4)).scale(2)


def test_coproduct_examples():
    assert coproduct("space", "P") == TensorExpr({((), ("P",)): 1, (("P",), ()): 1})
    g = GroupLike("H", -2)
    assert coproduct("time", "P") == TensorExpr({((), ("P",)): 1, (("P",), (g,)): 1})
    tau = -4 * z
    expected = TensorExpr({((), ("J+",)): 1, (("J+",), ()): 1, (("J+",), ("J+",)): tau})
    assert coproduct("sl2-mapped", "J+") == expected


@pytest.mark.parametrize("case", list(CASES))
def test_realization_soundness(case):
    pairs = relation_pairs(case)
    n = len(CASES[case].generators)
    assert len(pairs) == n * (n - 1) // 2
    for a, b in pairs:
        lhs = commutator(realize(a, case), realize(b, case))
        assert lhs == realize_word(relation_rhs(case, a, b), case), (a, b)


@pytest.mark.parametrize("case", ["space", "time", "classical-space", "classical-time"])
def test_casimir_centrality(case):
    e = realized_casimir(case)
    for g in CASES[case].generators:
        assert commutator(e, realize(g, case)) == symmetry_factor(case, g) * e, g


def test_galilei_generators_commute_with_casimir():
    for case in ("space", "time", "classical-space", "classical-time"):
        for g in "MPHK":
            assert symmetry_factor(case, g).is_zero()


def test_manifest_is_stable_and_labelled():
    rows = manifest()
    assert rows == manifest()
    assert all(r["anchor"] for r in rows)
    assert {r["table"] for r in rows} >= {"realization", "relations", "coproducts", "casimir"}
