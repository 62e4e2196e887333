import pytest

from qschrod.hopf import (
    ExcludedGenerator,
    check_coassociativity,
    check_group_like,
    check_group_like_power,
    check_homomorphism,
    composed_symmetry_check,
    delta,
    realize_tensor,
)
from qschrod.opalg import Dt, Dx, Sx, const, m
from qschrod.tables import CASES, coproduct, relation_pairs
from qschrod.words import gen


def test_realized_primitive():
    assert realize_tensor(coproduct("space", "P"), "space") == Dx(1) + Dx(2)


def test_realized_mass_on_two_sites():
    assert realize_tensor(coproduct("space", "M"), "space") == const(2 * m)
    assert realize_tensor(coproduct("time", "M"), "time") == const(2 * m)


def test_realized_space_hamiltonian():
    assert realize_tensor(coproduct("space", "H"), "space") == Dt(2) + Dt(1) * Sx(-2, 2)


def test_delta_is_multiplicative_on_words():
    k, p = gen("K"), gen("P")
    lhs = realize_tensor(delta(k * p, "space"), "space")
    rhs = realize_tensor(coproduct("space", "K"), "space") * realize_tensor(coproduct("space", "P"), "space")
    assert lhs == rhs


@pytest.mark.parametrize("case", ["space", "time"])
def test_homomorphism_all_pairs(case):
    for a, b in relation_pairs(case):
        r = check_homomorphism(case, a, b)
        assert r.passed, r


@pytest.mark.parametrize("case", ["space", "time"])
@pytest.mark.parametrize("g", list("MPHKDC"))
def test_coassociativity(case, g):
    assert check_coassociativity(case, g).passed


@pytest.mark.parametrize("case", ["classical-space", "classical-time", "sl2-deformed", "sl2-mapped"])
def test_other_cases_are_hopf(case):
    gens = CASES[case].generators
    for a, b in relation_pairs(case):
        assert check_homomorphism(case, a, b).passed
    for g in gens:
        assert check_coassociativity(case, g).passed


@pytest.mark.parametrize("amount", [-2, -1, 1, 2])
@pytest.mark.parametrize("kind", ["P", "H"])
def test_group_like_three_ways(kind, amount):
    case = "space" if kind == "P" else "time"
    assert check_group_like(kind, amount, case).passed


@pytest.mark.parametrize("power", [-2, -1, 1, 2])
@pytest.mark.parametrize("case", ["classical-space", "classical-time", "sl2-mapped"])
def test_group_like_powers(case, power):
    r = check_group_like_power(case, power)
    assert r.passed, r


@pytest.mark.parametrize("case", ["classical-space", "classical-time"])
@pytest.mark.parametrize("g", list("KHPMD"))
def test_composed_symmetry(case, g):
    assert composed_symmetry_check(case, g).passed


def test_conformal_generator_excluded():
    with pytest.raises(ExcludedGenerator):
        composed_symmetry_check("classical-space", "C")


def test_result_record_shape():
    d = check_coassociativity("space", "P").as_dict()
    assert d == {"case": "space", "check": "coassociativity", "pair": "P",
                 "residualTermCount": 0, "pass": True}
