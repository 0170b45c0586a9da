from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from pesym.liealg.exact import nullspace, reduce_mod, rref

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rref_matches_sympy(rows):
    ncols = len(rows[0])
    red, piv = rref(rows, ncols)
    ref, ref_piv = sp.Matrix(rows).rref()
    assert tuple(piv) == tuple(ref_piv)
    assert [[sp.Rational(x.numerator, x.denominator) for x in r] for r in red] == \
        [list(ref.row(i)) for i in range(len(piv))]


@given(matrices)
def test_nullspace_dimension_and_kernel(rows):
    ncols = len(rows[0])
    ker = nullspace(rows, ncols)
    assert len(ker) == len(sp.Matrix(rows).nullspace())
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(matrices, st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_reduce_mod_membership(rows, vec):
    ncols = len(rows[0])
    red, piv = rref(rows, ncols)
    combo = [sum(Fraction(r[j]) for r in rows) for j in range(ncols)]
    assert not any(reduce_mod(combo, red, piv))
    rem = reduce_mod([Fraction(v) for v in vec[:ncols]], red, piv)
    assert all(rem[p] == 0 for p in piv)


def test_rref_empty_and_zero():
    assert rref([[0, 0, 0]], 3) == ([], [])
    assert len(nullspace([], 3)) == 3


def test_rational_entries_stay_exact():
    red, piv = rref([[Fraction(1, 3), Fraction(2, 7)], [1, 1]], 2)
    assert red == [[1, 0], [0, 1]] and piv == [0, 1]
    (v,) = nullspace([[Fraction(1, 3), Fraction(2, 7)]], 2)
    assert Fraction(1, 3) * v[0] + Fraction(2, 7) * v[1] == 0
