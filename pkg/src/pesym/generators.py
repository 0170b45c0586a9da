"""Vector-field realizations of the symmetry generators.

``f`` is the Coriolis parameter; ``f = 0`` gives the resting-frame algebra.
Function parameters (gamma, alpha, lambda, psi) are :class:`Fn1D` objects.
"""
from __future__ import annotations

import numpy as np

from .fields import PhysConsts
from .functions import Fn1D
from .residual import VectorField


def _coeffs(z, **entries):
    out = np.zeros_like(z)
    index = {"tau": 0, "xi_x": 1, "xi_y": 2, "xi_p": 3, "eta_u": 4, "eta_v": 5,
             "eta_omega": 6, "eta_phi": 7, "eta_T": 8}
    for key, val in entries.items():
        out[index[key]] = val
    return out


def D1(f: float = 0.0) -> VectorField:
    fh = 0.5 * f

    def coeffs(z):
        t, x, y, p, u, v, w, phi, T = z
        return _coeffs(z, tau=t, xi_x=fh * t * y, xi_y=-fh * t * x,
                       eta_u=-(u - fh * t * v - fh * y), eta_v=-(v + fh * t * u + fh * x),
                       eta_omega=-w, eta_phi=-(2 * phi + fh * fh * (x * x + y * y)), eta_T=-2 * T)

    return VectorField(coeffs, "D1")


def D2() -> VectorField:
    def coeffs(z):
        t, x, y, p, u, v, w, phi, T = z
        return _coeffs(z, xi_x=x, xi_y=y, eta_u=u, eta_v=v, eta_phi=2 * phi, eta_T=2 * T)

    return VectorField(coeffs, "D2")


def D3() -> VectorField:
    def coeffs(z):
        return _coeffs(z, xi_p=z[3], eta_omega=z[6])

    return VectorField(coeffs, "D3")


def J() -> VectorField:
    def coeffs(z):
        t, x, y, p, u, v = z[:6]
        return _coeffs(z, xi_x=-y, xi_y=x, eta_u=-v, eta_v=u)

    return VectorField(coeffs, "J")


def P() -> VectorField:
    return VectorField(lambda z: _coeffs(z, tau=np.ones_like(z[0])), "P")


def S(consts: PhysConsts) -> VectorField:
    cp, kap = consts.c_p, consts.kappa

    def coeffs(z):
        pk = z[3] ** kap
        return _coeffs(z, eta_phi=cp * pk, eta_T=-pk)

    return VectorField(coeffs, "S")


def X(gamma: tuple, f: float = 0.0) -> VectorField:
    g1, g2 = gamma

    def coeffs(z):
        t, x, y = z[0], z[1], z[2]
        return _coeffs(z, xi_x=g1(t), xi_y=g2(t), eta_u=g1(t, 1), eta_v=g2(t, 1),
                       eta_phi=-(g1(t, 2) * x + g2(t, 2) * y + f * (g1(t, 1) * y - g2(t, 1) * x)))

    return VectorField(coeffs, "X")


def Z(alpha: Fn1D) -> VectorField:
    return VectorField(lambda z: _coeffs(z, eta_phi=alpha(z[0])), "Z")


def R_time(lam: Fn1D) -> VectorField:
    """Time re-parametrisation admitted only when c_p = R."""

    def coeffs(z):
        t, x, y, p, u, v, w, phi, T = z
        l0, l1, l2, l3 = (lam(t, k) for k in range(4))
        return _coeffs(z, tau=2 * l0, xi_x=l1 * x, xi_y=l1 * y, xi_p=-2 * l1 * p,
                       eta_u=-(l1 * u - l2 * x), eta_v=-(l1 * v - l2 * y),
                       eta_omega=-(4 * l1 * w + 2 * l2 * p),
                       eta_phi=-(2 * l1 * phi + 0.5 * l3 * (x * x + y * y)), eta_T=-2 * l1 * T)

    return VectorField(coeffs, "R")


def P_boost(psi: Fn1D) -> VectorField:
    """Generalised Galilean boost in p, admitted only when c_p = R."""

    def coeffs(z):
        t, p, T = z[0], z[3], z[8]
        return _coeffs(z, xi_p=psi(t), eta_omega=psi(t, 1), eta_T=psi(t) * T / p)

    return VectorField(coeffs, "Ppsi")


def rotated_pair(gamma: tuple, f: float) -> tuple:
    """gamma~ = rotation of gamma by angle f t / 2 (still a pair of Fn1D)."""
    return (_Rotated(gamma, 0.5 * f, 0), _Rotated(gamma, 0.5 * f, 1))


class _Rotated(Fn1D):
    def __init__(self, gamma, omega, component):
        self.gamma, self.omega, self.component = gamma, omega, component

    def __call__(self, t, n: int = 0):
        # Leibniz rule on R(omega t) gamma(t); d^k/dt^k R = omega^k R(omega t + k pi/2)
        from math import comb
        t = np.asarray(t, dtype=float)
        g1, g2 = self.gamma
        total = np.zeros_like(t)
        for k in range(n + 1):
            ang = self.omega * t + k * np.pi / 2
            c, s = np.cos(ang), np.sin(ang)
            a, b = g1(t, n - k), g2(t, n - k)
            rot = c * a - s * b if self.component == 0 else s * a + c * b
            total = total + comb(n, k) * self.omega**k * rot
        return total
