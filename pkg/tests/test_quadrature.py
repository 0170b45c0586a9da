import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from pesym.quadrature import (adaptive_simpson, composite_simpson, gauss_legendre, rk4,
                              simpson_doubling, steps_for)


@pytest.mark.parametrize("fn,a,b", [
    (math.sin, 0.0, 3.0),
    (lambda x: math.exp(-x * x), -2.0, 1.5),
    (lambda x: x ** (2 / 7), 0.2, 1.0),
    (lambda x: 1.0 / (1.0 + 25 * x * x), -1.0, 1.0),
])
def test_adaptive_simpson_vs_scipy(fn, a, b):
    ref, _ = integrate.quad(fn, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert adaptive_simpson(fn, a, b, 1e-12) == pytest.approx(ref, abs=1e-11)


def test_adaptive_simpson_orientation():
    assert adaptive_simpson(math.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), abs=1e-12)
    assert adaptive_simpson(math.cos, 0.5, 0.5) == 0.0


def test_composite_simpson_exact_on_cubics():
    a = np.array([0.0, -1.0])
    b = np.array([2.0, 3.0])
    got = composite_simpson(lambda x: x**3 - x, a, b, 2)
    np.testing.assert_allclose(got, (b**4 - a**4) / 4 - (b**2 - a**2) / 2, rtol=1e-14)


def test_simpson_doubling_converges():
    got = simpson_doubling(np.sin, 0.0, np.pi, tol=1e-13)
    assert got == pytest.approx(2.0, abs=1e-12)


@given(st.integers(1, 10), st.floats(-1, 1), st.floats(0.1, 2))
def test_gauss_legendre_exact_for_polynomials(n, a, width):
    b = a + width
    x, w = gauss_legendre(a, b, n)
    deg = 2 * n - 1
    got = np.sum(w * x**deg)
    ref = (b ** (deg + 1) - a ** (deg + 1)) / (deg + 1)
    assert got == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_gauss_legendre_batched_endpoints():
    x, w = gauss_legendre(0.0, np.array([1.0, 2.0, 3.0]), 5)
    assert x.shape == (3, 5)
    np.testing.assert_allclose(np.sum(w, axis=1), [1, 2, 3], rtol=1e-14)


def test_rk4_fourth_order():
    # y' = -t y^2 style nonlinear test against the closed form y = 2 / (1 + t^2)
    def rhs(t, y):
        return (-t * y[0] ** 2,)

    errs = []
    for steps in (10, 20, 40):
        (y,) = rk4(rhs, (np.array([2.0]),), np.array([0.0]), np.array([2.0]), steps)
        errs.append(abs(y[0] - 2.0 / 5.0))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(3.7 < o < 4.3 for o in orders)


def test_rk4_matches_solve_ivp_batched():
    t1 = np.array([0.5, 1.0, 1.5])

    def rhs(t, y):
        x, v = y
        return (v, -np.sin(x) - 0.1 * v)

    x, v = rk4(rhs, (np.full(3, 1.0), np.zeros(3)), np.zeros(3), t1, 400)
    for i, T in enumerate(t1):
        sol = integrate.solve_ivp(lambda t, y: [y[1], -np.sin(y[0]) - 0.1 * y[1]], (0, T), [1.0, 0.0],
                                  rtol=1e-12, atol=1e-12)
        assert x[i] == pytest.approx(sol.y[0, -1], abs=1e-9)


def test_rk4_backward_integration():
    (y,) = rk4(lambda t, y: (y[0],), (np.array([1.0]),), np.array([0.0]), np.array([-1.0]), 200)
    assert y[0] == pytest.approx(math.exp(-1.0), rel=1e-10)


def test_steps_for():
    assert steps_for(0.0, 200) == 4
    assert steps_for(-1.5, 200) == 300
