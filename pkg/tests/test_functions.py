import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from pesym import functions as fns

s = sp.Symbol("s")


def _sym(fn):
    if isinstance(fn, fns.Poly):
        return sum(c * s**k for k, c in enumerate(fn.coeffs))
    if isinstance(fn, fns.Sine):
        return fn.amp * sp.sin(fn.freq * s + fn.phase)
    if isinstance(fn, fns.Exp):
        return fn.amp * sp.exp(fn.rate * s)
    if isinstance(fn, fns.Scaled):
        return fn.c * _sym(fn.fn)
    if isinstance(fn, fns.Sum):
        return sum(_sym(t) for t in fn.terms)
    raise TypeError(fn)


CASES = [
    fns.Poly([0.3, -1.0, 0.5, 2.0]),
    fns.Sine(0.7, 1.3, 0.2),
    fns.Cosine(1.5, 2.0),
    fns.Exp(0.5, -0.8),
    fns.Poly([1.0, 2.0]) + fns.Sine(1.0, 3.0),
    -fns.Exp(2.0, 0.5),
]


@pytest.mark.parametrize("fn", CASES, ids=lambda f: type(f).__name__)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_derivatives_match_symbolic(fn, n):
    grid = np.linspace(-2, 2, 17)
    expr = sp.diff(_sym(fn), s, n)
    ref = np.array([float(expr.subs(s, x)) for x in grid])
    np.testing.assert_allclose(fn(grid, n), ref, rtol=1e-12, atol=1e-12)


def test_poly_derivative_beyond_degree_is_zero():
    assert np.all(fns.Poly([1.0, 2.0])(np.linspace(0, 1, 5), 3) == 0)


def test_scalar_input_keeps_shape():
    assert np.shape(fns.Poly([1.0])(0.5)) == ()
    assert fns.Poly([1.0])(np.zeros(4)).shape == (4,)


@pytest.mark.parametrize("cfg", [
    2.5, {"const": 1.0}, {"poly": [1, 2, 3]}, {"sin": {"amp": 2.0, "freq": 0.5}},
    {"cos": {}}, {"exp": {"rate": 0.3}}, {"sum": [{"poly": [1]}, {"sin": {}}]},
    {"scale": -2.0, "of": {"poly": [0, 1]}},
])
def test_config_roundtrip(cfg):
    fn = fns.from_config(cfg)
    again = fns.from_config(fn.to_config())
    grid = np.linspace(-1, 1, 9)
    for n in range(3):
        np.testing.assert_allclose(again(grid, n), fn(grid, n), rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("cfg", [{"tan": {}}, {}, "sin", {"sin": {"wobble": 1}}, {"poly": [1], "sin": {}}])
def test_config_rejects_unknown(cfg):
    with pytest.raises(ValueError):
        fns.from_config(cfg)


def test_pair_needs_two():
    with pytest.raises(ValueError):
        fns.pair_from_config([1.0])


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.floats(-2, 2))
def test_poly_product_rule(coeffs, x):
    # d/ds (s * q(s)) = q + s q'
    q = fns.Poly(coeffs)
    sq = fns.Poly([0.0] + list(coeffs))
    assert sq(x, 1) == pytest.approx(q(x) + x * q(x, 1), rel=1e-9, abs=1e-9)
