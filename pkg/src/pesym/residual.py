"""Residuals of the primitive equations and first-order symmetry checks.

Residual rows, every term moved to the left-hand side::

    r_u    = u_t + u u_x + v u_y + omega u_p - f v + phi_x
    r_v    = v_t + u v_x + v v_y + omega v_p + f u + phi_y
    r_hyd  = phi_p + R T / p
    r_cont = u_x + v_y + omega_p
    r_T    = T_t + u T_x + v T_y + omega T_p - kappa omega T / p - J / c_p
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, VerificationError
from .fields import (HeatingField, PhysConsts, StateField, as_points, check_pressure,
                     eval_partials_fd, zero_heating)

RESIDUAL_NAMES = ("r_u", "r_v", "r_hyd", "r_cont", "r_T")
COORDS9 = ("t", "x", "y", "p", "u", "v", "omega", "phi", "T")


def pe_residual(field: StateField, consts: PhysConsts, pts,
                J: HeatingField = zero_heating) -> np.ndarray:
    """Five residual components at each point; shape ``(5, n)``."""
    pts = as_points(pts)
    check_pressure(pts)
    s = field.value(pts)
    d = field.partials(pts)
    return residual_from_values(s, d, pts, consts, J(pts))


def residual_from_values(s, d, pts, consts: PhysConsts, heating) -> np.ndarray:
    u, v, w, phi, T = s
    p = pts[3]
    f = consts.f

    def material(row):
        return d[row, 0] + u * d[row, 1] + v * d[row, 2] + w * d[row, 3]

    return np.stack([
        material(0) - f * v + d[3, 1],
        material(1) + f * u + d[3, 2],
        d[3, 3] + consts.R * T / p,
        d[0, 1] + d[1, 2] + d[2, 3],
        material(4) - consts.kappa * w * T / p - np.asarray(heating) / consts.c_p,
    ])


@dataclass(frozen=True)
class ResidualNorms:
    linf: np.ndarray
    rms: np.ndarray
    count: int

    @property
    def max_linf(self) -> float:
        return float(np.max(self.linf))

    def as_dict(self) -> dict:
        return {
            "linf": dict(zip(RESIDUAL_NAMES, map(float, self.linf))),
            "rms": dict(zip(RESIDUAL_NAMES, map(float, self.rms))),
            "max_linf": self.max_linf,
            "points": self.count,
        }


def residual_norms(field: StateField, consts: PhysConsts, pts,
                   J: HeatingField = zero_heating, chunk: int = 2000) -> ResidualNorms:
    pts = as_points(pts)
    n = pts.shape[1]
    if n == 0:
        raise ValueError("residual_norms needs at least one point")
    linf = np.zeros(5)
    sq = np.zeros(5)
    for start in range(0, n, chunk):
        r = pe_residual(field, consts, pts[:, start:start + chunk], J)
        linf = np.maximum(linf, np.max(np.abs(r), axis=1))
        sq += np.sum(r * r, axis=1)
    return ResidualNorms(linf, np.sqrt(sq / n), n)


class VectorField:
    """Point vector field on the 9-dimensional (t,x,y,p,u,v,omega,phi,T) space.

    ``coeffs_fn`` maps a ``(9, n)`` array of points to the ``(9, n)`` array
    of coefficients (tau, xi^x, xi^y, xi^p, eta^u, eta^v, eta^omega,
    eta^phi, eta^T).
    """

    def __init__(self, coeffs_fn: Callable[[np.ndarray], np.ndarray], name: str = "Q"):
        self.coeffs_fn = coeffs_fn
        self.name = name

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.ndim == 1:
            z = z[:, None]
        return np.asarray(self.coeffs_fn(z), dtype=float)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(lambda z: self(z) + other(z), f"({self.name} + {other.name})")

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(lambda z: self(z) - other(z), f"({self.name} - {other.name})")

    def __rmul__(self, c: float) -> "VectorField":
        c = float(c)
        return VectorField(lambda z: c * self(z), f"{c:g}*{self.name}")

    def __repr__(self):
        return f"VectorField({self.name})"


def lift(pts, s) -> np.ndarray:
    """Stack independent and dependent values into 9-dimensional points."""
    return np.concatenate([as_points(pts), s], axis=0)


def characteristic(vf: VectorField, field: StateField, pts) -> np.ndarray:
    """Evolutionary components ``eta^a - tau s^a_t - xi . grad s^a - xi^p s^a_p``."""
    pts = as_points(pts)
    s = field.value(pts)
    d = field.partials(pts)
    c = vf(lift(pts, s))
    return c[4:] - np.einsum("kn,akn->an", c[:4], d)


def deformed_field(vf: VectorField, field: StateField, eps: float, h: float = 1e-3,
                   order: int = 6) -> StateField:
    """First-order flow of ``field`` along ``vf``: ``s + eps Q[s]``.

    Partials combine the base partials with central differences of the
    characteristic only (sixth-order stencil), so the base derivative
    quality is preserved.
    """
    q_field = StateField(lambda pts: characteristic(vf, field, pts), None, h)

    def value(pts):
        return field.value(pts) + eps * q_field.value(pts)

    def partials(pts):
        return field.partials(pts) + eps * eval_partials_fd(q_field, pts, h, order)

    return StateField(value, partials, h, name=f"{field.name}+eps*{vf.name}")


def infinitesimal_defect(vf: VectorField, field: StateField, consts: PhysConsts, eps: float,
                         pts, J: HeatingField = zero_heating, gate: float = 1e-9) -> float:
    """L-infinity residual of the first-order deformed field.

    For a symmetry generator the defect is O(eps^2). The base field must be
    a verified solution (residual below ``gate``).
    """
    pts = as_points(pts)
    base = residual_norms(field, consts, pts, J).max_linf
    if base >= gate:
        raise VerificationError(f"base field is not a solution: residual {base:.3e} >= {gate:.1e}")
    return residual_norms(deformed_field(vf, field, eps), consts, pts, J).max_linf


@dataclass(frozen=True)
class DefectScaling:
    eps: tuple
    defects: tuple
    ratios: tuple
    quadratic: bool

    def as_dict(self):
        return {"eps": list(self.eps), "defects": list(self.defects),
                "ratios": list(self.ratios), "quadratic": self.quadratic}


def defect_scaling(vf: VectorField, field: StateField, consts: PhysConsts, pts,
                   eps_values: Sequence[float] = (1e-2, 1e-3, 1e-4),
                   band: tuple = (50.0, 200.0), floor: float = 1e-12,
                   J: HeatingField = zero_heating) -> DefectScaling:
    """Quadratic-defect test: per-decade ratios in ``band`` or defects below ``floor``."""
    defects = tuple(infinitesimal_defect(vf, field, consts, e, pts, J) for e in eps_values)
    ratios = tuple(a / b if b > 0 else np.inf for a, b in zip(defects, defects[1:]))
    decade = eps_values[0] / eps_values[1]
    lo, hi = band[0] * decade**2 / 100.0, band[1] * decade**2 / 100.0
    below = all(d < floor for d in defects)
    quadratic = below or all(lo <= r <= hi for r in ratios)
    return DefectScaling(tuple(eps_values), defects, ratios, quadratic)


def tracer_residual(field: StateField, S: Callable, Q: Callable, pts, h: float = 1e-6) -> np.ndarray:
    """``S_t + u S_x + v S_y + omega S_p - Q`` for a scalar tracer ``S``."""
    pts = as_points(pts)
    s = field.value(pts)
    grad = np.empty((4, pts.shape[1]))
    for k in range(4):
        step = h * max(1.0, float(np.max(np.abs(pts[k]))))
        hi, lo = pts.copy(), pts.copy()
        hi[k] += step
        lo[k] -= step
        grad[k] = (S(hi) - S(lo)) / (2 * step)
    return grad[0] + s[0] * grad[1] + s[1] * grad[2] + s[2] * grad[3] - Q(pts)
