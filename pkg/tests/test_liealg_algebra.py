from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pesym.fields import PhysConsts
from pesym.liealg import (TruncatedAlgebra, antisymmetry_defect, jacobi_check, realize, sample_states,
                          vf_bracket_at)
from pesym.liealg.algebra import AlgVector, PolyFn

KAPPA = Fraction(2, 7)


@pytest.fixture(scope="module")
def alg():
    return TruncatedAlgebra(3, KAPPA)


def test_dimensions():
    for N in (2, 3, 4, 6):
        a = TruncatedAlgebra(N)
        assert a.dim == 6 + 2 * (N + 1) + (a.M + 1) == len(a.labels) == len(a.basis)
    with pytest.raises(ValueError):
        TruncatedAlgebra(1)


def test_xx_bracket_orientation(alg):
    # [X((t^2,0)), X((1,0))] = Z(+2), and the reverse is Z(-2)
    a, b = alg.X([0, 0, 1]), alg.X([1])
    assert alg.bracket(a, b) == alg.Z([2])
    assert alg.bracket(b, a) == alg.Z([-2])


@pytest.mark.parametrize("x,y,expected", [
    ("D1", "P", lambda a: a.scalar("P").scale(-1)),
    ("S", "D3", lambda a: a.scalar("S").scale(-KAPPA)),
    ("S", "D1", lambda a: a.scalar("S").scale(-2)),
    ("S", "D2", lambda a: a.scalar("S").scale(2)),
    ("J", "P", lambda a: a.zero()),
    ("D2", "D3", lambda a: a.zero()),
])
def test_scalar_brackets(alg, x, y, expected):
    assert alg.bracket(alg.scalar(x), alg.scalar(y)) == expected(alg)


def test_x_brackets(alg):
    # [J, X(gamma)] rotates gamma; [P, X(gamma)] differentiates it
    assert alg.bracket(alg.scalar("J"), alg.X([1], [0])) == alg.X([0], [-1])
    assert alg.bracket(alg.scalar("P"), alg.X([0, 0, 1])) == alg.X([0, 2])
    assert alg.bracket(alg.scalar("D2"), alg.X([1])) == alg.X([-1])


@pytest.mark.parametrize("N", [2, 3])
def test_antisymmetry_and_jacobi_exact(N):
    a = TruncatedAlgebra(N)
    assert antisymmetry_defect(a) == 0
    assert jacobi_check(a) == 0


def test_broken_bracket_caught(alg):
    def broken(x, y):
        r = alg.bracket(x, y)
        touched = x.d1 or y.d1
        return AlgVector(r.d1, r.d2, r.d3, r.j, r.p * 2 if touched else r.p, r.s, r.g1, r.g2, r.alpha)

    assert antisymmetry_defect(alg, broken) == 0
    assert jacobi_check(alg, bracket=broken) > 0


def test_table_matches_bracket(alg):
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = [Fraction(int(v)) for v in rng.integers(-2, 3, alg.dim)]
        y = [Fraction(int(v)) for v in rng.integers(-2, 3, alg.dim)]
        via_table = alg.bracket_coords(x, y)
        direct = alg.coords(alg.bracket(alg.vector(x), alg.vector(y)))
        assert tuple(via_table) == direct


def test_polyfn():
    p = PolyFn.of([1, 2], 3)
    assert p.degree() == 1 and p(2.0) == 5.0 and p(2.0, 1) == 2.0
    with pytest.raises(OverflowError):
        PolyFn.of([0, 0, 0, 0, 1], 3)
    with pytest.raises(OverflowError):
        PolyFn.of([0, 0, 1], 3).mul(PolyFn.of([0, 0, 1], 3), 3)
    assert PolyFn.of([0, 1], 3).t_deriv() == PolyFn.of([0, 1], 3)


small = st.integers(-2, 2)


@st.composite
def low_degree(draw, alg):
    """Elements whose brackets stay inside the truncation."""
    return alg.element(*(draw(small) for _ in range(6)), gamma=([draw(small), draw(small)], [draw(small)]),
                       alpha=[draw(small), draw(small)])


REALIZE_ALG = TruncatedAlgebra(3, KAPPA)


@given(low_degree(REALIZE_ALG), low_degree(REALIZE_ALG))
def test_bracket_equals_vector_field_commutator(a, b):
    alg = REALIZE_ALG
    consts = PhysConsts(R=2.0, c_p=7.0)
    z = sample_states(3, 15)
    lhs = vf_bracket_at(realize(a, "g0", consts), realize(b, "g0", consts), z)
    rhs = realize(alg.bracket(a, b), "g0", consts)(z)
    assert np.max(np.abs(lhs - rhs)) < 1e-8 * max(1.0, np.max(np.abs(rhs)))


def test_realize_rejects_unknown_algebra(alg):
    with pytest.raises(ValueError):
        realize(alg.zero(), "gz")
