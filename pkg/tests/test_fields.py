import numpy as np
import pytest
import sympy as sp

from pesym.errors import DomainError
from pesym.fields import (DEFAULT_BOX, Box, PhysConsts, StateField, eval_partials_fd,
                          field_from_config, make_advected, make_inertial, make_stratified,
                          sample_points)
from pesym.functions import Poly, Sine
from pesym.residual import residual_norms

t, x, y = sp.symbols("t x y", real=True)
p = sp.Symbol("p", positive=True)


def _sympy_field(exprs):
    """StateField from five sympy expressions, partials by symbolic differentiation."""
    val = sp.lambdify((t, x, y, p), exprs, "numpy")
    jac = sp.lambdify((t, x, y, p), [[sp.diff(e, v) for v in (t, x, y, p)] for e in exprs], "numpy")

    def value(pts):
        return np.array([np.broadcast_to(r, pts[0].shape) for r in val(*pts)], dtype=float)

    def partials(pts):
        rows = jac(*pts)
        return np.array([[np.broadcast_to(c, pts[0].shape) for c in r] for r in rows], dtype=float)

    return StateField(value, partials, name="sympy")


def test_physconsts_validation():
    assert PhysConsts().kappa == pytest.approx(2 / 7)
    with pytest.raises(DomainError):
        PhysConsts(R=-1.0)
    with pytest.raises(DomainError):
        PhysConsts(R=2.0, c_p=1.0)
    with pytest.raises(DomainError):
        PhysConsts(R=1.0, c_p=1.0)
    assert PhysConsts(R=1.0, c_p=1.0, allow_kappa_one=True).kappa == 1.0
    assert PhysConsts(R=2, c_p=7).kappa_exact == sp.Rational(2, 7)


def test_box_validation():
    with pytest.raises(DomainError):
        Box(p=(0.0, 1.0))
    with pytest.raises(DomainError):
        Box(t=(1.0, 1.0))


def test_sample_points_deterministic_and_inside():
    a, b = sample_points(3, 50), sample_points(3, 50)
    np.testing.assert_array_equal(a, b)
    lo, hi = DEFAULT_BOX.bounds().T
    assert np.all(a >= lo[:, None]) and np.all(a <= hi[:, None])


def test_stratified_against_symbolic():
    consts = PhysConsts()
    u0, v0, T0 = Poly([0.5, 1.0]), Poly([-0.2, 0.0, 0.8]), Poly([1.0, 0.5])
    phi = -consts.R * sp.integrate((1 + sp.Rational(1, 2) * sp.Symbol("s")) / sp.Symbol("s"),
                                   (sp.Symbol("s"), 1, p))
    ref = _sympy_field([sp.Rational(1, 2) + p, -sp.Rational(1, 5) + sp.Rational(4, 5) * p**2,
                        sp.Integer(0), phi, 1 + p / 2])
    fld = make_stratified(u0, v0, T0, 1.0, consts)
    pts = sample_points(1, 200)
    np.testing.assert_allclose(fld.value(pts), ref.value(pts), atol=1e-12)
    np.testing.assert_allclose(fld.partials(pts), ref.partials(pts), atol=1e-12)


def test_advected_against_symbolic():
    consts = PhysConsts()
    kap = sp.Rational(2, 7)
    chi = sp.Rational(1, 2)
    xi = p - chi * t
    s_ = sp.Symbol("s", positive=True)
    T0 = lambda q: 1 + q / 2
    phi = -sp.integrate(sp.expand(s_ ** (kap - 1) * T0(s_ - chi * t)), (s_, 1, p))
    ref = _sympy_field([2 * xi, sp.Rational(3, 10) - xi + xi**2 / 2, chi, phi, p**kap * T0(xi)])
    fld = field_from_config("manufactured-polynomial", consts)
    pts = sample_points(2, 200)
    np.testing.assert_allclose(fld.value(pts), ref.value(pts), atol=1e-12)
    np.testing.assert_allclose(fld.partials(pts), ref.partials(pts), atol=1e-12)


def test_inertial_against_symbolic():
    f = sp.Integer(1)
    c, s_ = sp.cos(f * t / 2), sp.sin(f * t / 2)
    a, b = sp.Rational(1, 2) + p, -sp.Rational(1, 5) + sp.Rational(4, 5) * p**2
    phi = -sp.integrate((1 + sp.Symbol("q") / 2) / sp.Symbol("q"), (sp.Symbol("q"), 1, p)) - (x**2 + y**2) / 8
    ref = _sympy_field([c * a + s_ * b + y / 2, -s_ * a + c * b - x / 2, sp.Integer(0), phi, 1 + p / 2])
    fld = field_from_config("inertial", PhysConsts(f=1.0))
    pts = sample_points(3, 200)
    np.testing.assert_allclose(fld.value(pts), ref.value(pts), atol=1e-12)
    np.testing.assert_allclose(fld.partials(pts), ref.partials(pts), atol=1e-12)


@pytest.mark.parametrize("order,h,tol", [(2, 1e-5, 1e-8), (4, 1e-3, 1e-9), (6, 1e-3, 1e-11)])
def test_fd_partials_orders(order, h, tol):
    fld = field_from_config("manufactured-polynomial")
    pts = sample_points(4, 100)
    err = np.max(np.abs(eval_partials_fd(fld, pts, h, order) - fld.partials(pts)))
    assert err < tol


def test_fd_stencil_guard():
    fld = field_from_config("stratified")
    pts = np.array([[0.0], [0.0], [0.0], [1e-6]])
    with pytest.raises(DomainError):
        eval_partials_fd(fld, pts, h=1e-5)


def test_nonpositive_pressure_rejected():
    fld = field_from_config("stratified")
    with pytest.raises(DomainError):
        fld.value(np.array([[0.0], [0.0], [0.0], [-0.1]]))


def test_field_config_errors():
    with pytest.raises(ValueError):
        field_from_config("nope")
    with pytest.raises(ValueError):
        field_from_config({"name": "stratified", "bogus": 1})
    with pytest.raises(ValueError):
        field_from_config({"name": "stratified", "mode": "magic"})
    with pytest.raises(TypeError):
        make_advected(Poly([0.0]), Poly([0.0]), Sine())


def test_fd_mode_reports_itself():
    fld = field_from_config({"name": "stratified", "mode": "fd"})
    assert fld.derivative_mode == "fd"
    assert residual_norms(fld, PhysConsts(), sample_points(0, 200)).max_linf < 1e-6


def test_inertial_f_zero_reduces_to_stratified():
    u0, v0, T0 = Poly([0.5, 1.0]), Poly([-0.2, 0.0, 0.8]), Poly([1.0, 0.5])
    pts = sample_points(5, 100)
    a = make_inertial(u0, v0, T0, 1.0, 0.0).value(pts)
    b = make_stratified(u0, v0, T0, 1.0).value(pts)
    np.testing.assert_array_equal(a, b)
