from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qschrod.lattice import (
    FAMILIES,
    ClosedFormRequired,
    DispersionSolution,
    ExpPoly,
    Grid,
    GridFunction,
    HeatKernel,
    StencilOutOfRange,
    apply,
    apply_symmetry,
    family_operator,
    heat_kernel_convergence,
    numeric_operator,
    polynomial_kernel_rank,
    residual,
    symmetry_factor_check,
)
from qschrod.opalg import Dx, Sx
from qschrod.tables import CASES

F = Fraction
S, TAU, M = F(1, 10), F(1, 20), F(1, 2)
EXACT = Grid(12, 12, S, TAU, F(3, 10), F(1, 5))
FLOAT = Grid(12, 12, 0.1, 0.05, 0.3, 0.2)

SOLUTIONS = {
    "bk": [DispersionSolution.bk(mu, S, TAU, M) for mu in (F(11, 10), F(9, 10), F(6, 5))],
    "ci": [DispersionSolution.ci(k, S, TAU, M) for k in (F(1, 2), F(-7, 10), F(6, 5))],
    "za": [DispersionSolution.za(mu, S, TAU, M) for mu in (F(11, 10), F(9, 10), F(6, 5))],
}
PROBES = [
    ExpPoly.monomial(2, 1),
    ExpPoly.monomial(3, 0),
    ExpPoly.monomial(1, 2) + ExpPoly.monomial(),
    ExpPoly.monomial(alpha=0.3, beta=-0.1),
    ExpPoly.monomial(1, 0, alpha=0.2, beta=0.1),
]
PAIRS = [(f, c, g) for f in ("bk", "ci") for c in FAMILIES[f][2] for g in CASES[c].generators]


def _sample(p):
    return GridFunction.sample(EXACT if p.is_polynomial else FLOAT, p)


def test_grid_invariants():
    with pytest.raises(ValueError):
        Grid(7, 12, S, TAU)
    with pytest.raises(ValueError):
        Grid(12, 12, 0, TAU)


@pytest.mark.parametrize("family", ["bk", "ci", "za"])
def test_constants_and_linear_functions_solve(family):
    for p in (ExpPoly.monomial(), ExpPoly.monomial(1, 0)):
        rep = residual(family, GridFunction.sample(EXACT, p), M)
        assert rep.max_abs == 0


@pytest.mark.parametrize("family", ["bk", "ci", "za"])
def test_dispersion_solutions(family):
    for sol in SOLUTIONS[family]:
        assert sol.dispersion_gap() == 0
        assert residual(family, sol.on(FLOAT), M).relative <= 1e-12


@pytest.mark.parametrize("family,case,g", PAIRS)
def test_symmetries_map_solutions_to_solutions(family, case, g):
    assert len(SOLUTIONS[family]) >= 3
    for sol in SOLUTIONS[family]:
        img = apply_symmetry(family, g, sol.on(FLOAT), case, M)
        assert residual(family, img, M).relative <= 1e-9


@pytest.mark.parametrize("family,case,g", PAIRS)
def test_symmetry_factor_on_probes(family, case, g):
    assert len(PROBES) >= 5
    for p in PROBES:
        res = symmetry_factor_check(family, g, _sample(p), case, M, 1e-9)
        assert res.passed, res
        if p.is_polynomial:
            assert res.max_abs == 0


def test_factor_examples():
    assert symmetry_factor_check("bk", "D", _sample(ExpPoly.monomial(2, 1)), "classical-space", M).passed
    assert symmetry_factor_check("bk", "C", _sample(ExpPoly.monomial(3, 0)), "space", M).passed
    assert symmetry_factor_check("ci", "M", _sample(PROBES[3]), "time", M).passed


def test_no_symmetries_on_za():
    with pytest.raises(KeyError):
        apply_symmetry("za", "P", SOLUTIONS["za"][0].on(FLOAT))


def test_off_grid_shift_rejected():
    op = numeric_operator(Sx(F(1, 2)), "bk", -S, M)
    with pytest.raises(StencilOutOfRange):
        apply(op, _sample(ExpPoly.monomial(1, 0)))


def test_small_grid_runs_out_of_interior():
    g = Grid(8, 8, S, TAU)
    big = numeric_operator(Sx(-8), "bk", -S, M)
    with pytest.raises(StencilOutOfRange):
        apply(big, GridFunction.sample(g, ExpPoly.monomial(1, 0)))


def test_derivative_needs_closed_form():
    phi = _sample(ExpPoly.monomial(2, 0))
    bare = GridFunction(phi.grid, phi.values)
    with pytest.raises(ClosedFormRequired):
        apply(numeric_operator(Dx(), "bk", -S, M), bare)
    # pure stencils are fine without one
    out, _ = apply(numeric_operator(Sx(-1), "bk", -S, M), bare)
    assert out.values[0, 0] == phi.values[1, 0]


def test_stencil_matches_closed_form_exactly():
    phi = _sample(ExpPoly.monomial(3, 1))
    out, _ = apply(family_operator("bk", EXACT, M), phi)
    ref = GridFunction.sample(EXACT, out.closed).restrict(out.box)
    assert (out.values == ref.values).all()


@pytest.mark.parametrize("family", ["bk", "ci"])
def test_polynomial_kernel_rank(family):
    kr = polynomial_kernel_rank(family, EXACT, 3, M)
    assert kr["numeric"] == kr["symbolic"]
    assert kr["monomials"] == 10
    # 1, x, t + m x^2, and a cubic combination survive
    assert kr["kernel"] == 4


def test_heat_kernel_converges_at_first_order():
    pts = heat_kernel_convergence([0.1, 0.05, 0.025, 0.0125])
    res = [r for _, r in pts]
    assert all(a > b for a, b in zip(res, res[1:]))
    orders = [np.log2(a / b) for a, b in zip(res, res[1:])]
    # pre-asymptotic at coarse sigma, tending to 1
    assert all(a < b for a, b in zip(orders, orders[1:])), orders
    assert abs(orders[-1] - 1) < 0.05, orders


def test_heat_kernel_derivative_limit():
    with pytest.raises(NotImplementedError):
        HeatKernel(0.5).derive(0, 2)


def test_dump_records():
    phi = GridFunction.sample(Grid(8, 8, S, TAU), ExpPoly.monomial(1, 0))
    lines = phi.dump().splitlines()
    assert len(lines) == 64
    assert lines[1] == "0 1 0 1/20 0"


@settings(max_examples=60)
@given(st.sampled_from(["bk", "ci", "za"]),
       st.integers(0, 3), st.integers(0, 2),
       st.sampled_from([F(-2), F(1, 3), F(5, 2)]))
def test_linearity_of_family_operator(family, p, q, c):
    e = family_operator(family, EXACT, M)
    f = ExpPoly.monomial(p, q)
    g = ExpPoly.monomial(1, 1, c) + ExpPoly.monomial(0, 1)
    a, _ = apply(e, _sample(f + g.scale(c)))
    b, _ = apply(e, _sample(f))
    d, _ = apply(e, _sample(g))
    assert ((a.values - b.values - c * d.values) == 0).all()
