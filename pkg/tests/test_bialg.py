from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qschrod.bialg import (
    SCHRODINGER_ALGEBRA as SCH,
    SL2_ALGEBRA as SL2,
    BFIELD,
    Bivector,
    DivergentLimit,
    ad_invariant,
    classify_sa,
    co_jacobi_check,
    cocommutator,
    cocycle_check,
    first_order_consistency,
    r_sl2,
    r_space,
    r_time,
    sa_bivector,
    sa_limit,
    schouten,
    schouten_cyclic,
    wedge,
)
from qschrod.bialg import bz, lam, z1, z2
from qschrod.opalg.scalar import FIELD, frac, sadd, smul

ALGEBRAS = [SCH, SL2]


def test_structure_constants_load_cleanly():
    for alg in ALGEBRAS:
        assert alg.is_antisymmetric()
        assert alg.jacobi_violations() == []


def test_schrodinger_brackets():
    i = SCH.index
    assert SCH.c(i("K"), i("P"), i("M")) == 1
    assert SCH.c(i("H"), i("C"), i("D")) == 1
    assert SCH.c(i("D"), i("H"), i("H")) == -2


def test_bivector_is_antisymmetric():
    r = wedge(SCH, [(3, "P", "K")])
    assert r.at(SCH.index("P"), SCH.index("K")) == 3
    assert r.at(SCH.index("K"), SCH.index("P")) == -3


def test_d_prime_expands():
    r = wedge(SCH, [(1, "P", "D'")])
    assert r.at(SCH.index("P"), SCH.index("D")) == 1
    assert r.at(SCH.index("P"), SCH.index("M")) == BFIELD(1) / 2


@pytest.mark.parametrize("r", [r_space(), r_time(), r_sl2(), Bivector(SCH)])
def test_named_r_matrices_are_triangular(r):
    assert schouten(r) == {}
    assert schouten_cyclic(r) == {}


def test_cocommutator_examples():
    i = SCH.index
    d = cocommutator(r_space())
    assert d[i("M")] == {}
    assert d[i("P")] == {}
    assert d[i("H")] == {(i("P"), i("H")): 2 * bz, (i("H"), i("P")): -2 * bz}


@pytest.mark.parametrize("r", [r_space(), r_time(), r_sl2()])
def test_named_cocommutators_are_bialgebras(r):
    d = cocommutator(r)
    assert cocycle_check(r.alg, d)
    assert co_jacobi_check(r.alg, d)


def test_zero_cocommutator():
    d = {i: {} for i in range(SCH.dim)}
    assert cocycle_check(SCH, d) and co_jacobi_check(SCH, d)


def test_sa_symbolic_is_coboundary_bialgebra():
    rep = classify_sa()
    assert rep.cocycle and rep.co_jacobi and rep.ad_invariant
    assert not rep.triangular
    assert rep.critical_lambda == -z2**2 / (4 * z1)


def test_sa_obstruction_is_a_perfect_square():
    i = SCH.index
    tri = classify_sa().schouten
    key = (i("M"), i("P"), i("K"))
    assert {k for k in tri if k[0] < k[1] < k[2]} == {key}
    assert tri[key] == -(4 * z1 * lam + z2**2) ** 2 / (256 * z1**2)


def test_sa_triangular_at_critical_lambda():
    r = sa_bivector().substitute({"lam": -z2**2 / (4 * z1)})
    assert schouten(r) == {}
    assert schouten_cyclic(r) == {}


def test_sa_numeric_critical_point():
    assert classify_sa(1, 2, -1).triangular
    assert not classify_sa(1, 2, 1).triangular


def test_sa_reduces_to_time_r_matrix():
    assert sa_limit() == r_time(z1)


def test_sa_divergent_limits():
    with pytest.raises(DivergentLimit):
        sa_bivector(0, 1, 1)
    with pytest.raises(DivergentLimit):
        sa_bivector(1, 1, 0)
    assert sa_bivector(2, 0, 0) == r_time(2)


@pytest.mark.parametrize("case", ["space", "time", "sl2-mapped"])
def test_first_order_consistency(case):
    for res in first_order_consistency(case):
        assert res.passed, res


# --- randomized ------------------------------------------------------------

COEFFS = [Fraction(1), Fraction(-2), Fraction(1, 3), bz, z1, -lam / 2]


@st.composite
def bivectors(draw, alg):
    n = draw(st.integers(1, 4))
    terms = []
    for _ in range(n):
        a, b = draw(st.lists(st.sampled_from(alg.basis), min_size=2, max_size=2, unique=True))
        terms.append((draw(st.sampled_from(COEFFS)), a, b))
    return wedge(alg, terms)


@settings(max_examples=200)
@given(st.sampled_from(ALGEBRAS).flatmap(bivectors))
def test_schouten_matches_cyclic_oracle(r):
    assert schouten(r) == schouten_cyclic(r)


@settings(max_examples=100)
@given(st.sampled_from(ALGEBRAS).flatmap(bivectors))
def test_coboundary_is_cocycle(r):
    assert cocycle_check(r.alg, cocommutator(r))


@settings(max_examples=100)
@given(st.sampled_from(ALGEBRAS).flatmap(bivectors))
def test_co_jacobi_iff_ad_invariant(r):
    assert co_jacobi_check(r.alg, cocommutator(r)) == ad_invariant(r.alg, schouten(r))


@settings(max_examples=100)
@given(st.sampled_from(ALGEBRAS).flatmap(bivectors))
def test_cocommutator_values_are_antisymmetric(r):
    for comp in cocommutator(r).values():
        for (a, b), v in comp.items():
            assert comp.get((b, a)) == -v


# fast scalar path against the generic field constructor
_z, _m = FIELD.gens
_PARTS = [FIELD(1), FIELD(-3), FIELD(2) / 7, _z, _m, _z * _m**2, 3 * _z**2, _z + _m, _z**2 - _m, -_m / 5]
_MONO = [FIELD(1), FIELD(6), _z, _m**2, 4 * _z * _m, -2 * _z**3]


@settings(max_examples=500)
@given(st.sampled_from(_PARTS), st.sampled_from(_PARTS), st.sampled_from(_MONO), st.sampled_from(_MONO))
def test_fast_scalar_path_is_canonical(a, b, da, db):
    x, y = a / da, b / db
    assert sadd(x, y) == x + y
    assert smul(x, y) == x * y
    s, p = sadd(x, y), smul(x, y)
    ref_s, ref_p = FIELD.new(x.numer * y.denom + y.numer * x.denom, x.denom * y.denom), x * y
    assert (s.numer, s.denom) == (ref_s.numer, ref_s.denom)
    assert (p.numer, p.denom) == (ref_p.numer, ref_p.denom)
    f = frac(a.numer * db.numer, da.numer)
    ref = FIELD.new(a.numer * db.numer, da.numer)
    assert (f.numer, f.denom) == (ref.numer, ref.denom)
