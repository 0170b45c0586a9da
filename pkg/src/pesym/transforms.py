"""Finite point transformations of the nine-dimensional jet-free space.

A point is a column ``z = (t, x, y, p, u, v, omega, phi, T)``; arrays are
``(9, n)``. Every map here is projectable: the independent part of the
image depends on ``(t, x, y, p)`` only, so it transports solution fields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .fields import Box, HeatingField, PhysConsts, StateField, as_points, check_pressure
from .functions import Fn1D, Poly, from_config
from .residual import VectorField

Map9 = Callable[[np.ndarray], np.ndarray]


def _as9(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    if z.shape[0] != 9:
        raise ValueError(f"points must have shape (9, n), got {z.shape}")
    return z


def fd_jacobian(fn: Map9, z, h: float = 1e-6) -> np.ndarray:
    """Central-difference 9x9 Jacobian of ``fn``; shape ``(9, 9, n)``."""
    z = _as9(z)
    out = np.empty((9, 9, z.shape[1]))
    for k in range(9):
        step = h * np.maximum(1.0, np.abs(z[k]))
        hi, lo = z.copy(), z.copy()
        hi[k] += step
        lo[k] -= step
        out[:, k] = (fn(hi) - fn(lo)) / (2 * step)
    return out


@dataclass(frozen=True)
class GroupMap:
    """A point transformation with its inverse and closed-form Jacobian.

    ``jacobian_fn`` returns ``d forward / d z`` as ``(9, 9, n)``; without it
    the Jacobian falls back to central differences.
    """

    forward_fn: Map9
    inverse_fn: Map9
    jacobian_fn: Optional[Map9] = None
    name: str = "map"

    def forward(self, z) -> np.ndarray:
        return self.forward_fn(_as9(z))

    def inverse(self, z) -> np.ndarray:
        return self.inverse_fn(_as9(z))

    def jacobian(self, z) -> np.ndarray:
        z = _as9(z)
        if self.jacobian_fn is None:
            return fd_jacobian(self.forward_fn, z)
        return self.jacobian_fn(z)

    def base_forward(self, pts) -> np.ndarray:
        pts = as_points(pts)
        return self.forward(np.vstack([pts, np.zeros((5, pts.shape[1]))]))[:4]

    def base_inverse(self, pts) -> np.ndarray:
        pts = as_points(pts)
        return self.inverse(np.vstack([pts, np.zeros((5, pts.shape[1]))]))[:4]


def identity_map() -> GroupMap:
    return GroupMap(lambda z: z.copy(), lambda z: z.copy(),
                    lambda z: np.broadcast_to(np.eye(9)[:, :, None], (9, 9, z.shape[1])).copy(),
                    "identity")


def compose(g1: GroupMap, g2: GroupMap) -> GroupMap:
    """``g1 o g2``: apply ``g2`` first."""

    def jac(z):
        return np.einsum("ijn,jkn->ikn", g1.jacobian(g2.forward(z)), g2.jacobian(z))

    return GroupMap(lambda z: g1.forward(g2.forward(z)), lambda z: g2.inverse(g1.inverse(z)),
                    jac, f"{g1.name}*{g2.name}")


def invert(g: GroupMap) -> GroupMap:
    def jac(z):
        # inverse function theorem at the preimage
        m = g.jacobian(g.inverse(z))
        return np.moveaxis(np.linalg.inv(np.moveaxis(m, 2, 0)), 0, 2)

    return GroupMap(g.inverse_fn, g.forward_fn, jac, f"{g.name}^-1")


def _rot(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def derotation(f: float) -> GroupMap:
    """Map solutions in a frame rotating with Coriolis parameter ``f`` to the resting frame.

    ``x~ = R(f t/2) x``, ``u~ = R(f t/2) u + (f/2) J x~`` with ``J = [[0,-1],[1,0]]``,
    ``phi~ = phi + f^2/8 (x^2 + y^2)``; ``t, p, omega, T`` are unchanged.
    """
    fh = 0.5 * f

    def forward(z):
        out = z.copy()
        c, s = np.cos(fh * z[0]), np.sin(fh * z[0])
        xt = c * z[1] - s * z[2]
        yt = s * z[1] + c * z[2]
        out[1], out[2] = xt, yt
        out[4] = c * z[4] - s * z[5] - fh * yt
        out[5] = s * z[4] + c * z[5] + fh * xt
        out[7] = z[7] + 0.125 * f * f * (z[1] ** 2 + z[2] ** 2)
        return out

    def inverse(z):
        out = z.copy()
        c, s = np.cos(fh * z[0]), np.sin(fh * z[0])
        a = z[4] + fh * z[2]
        b = z[5] - fh * z[1]
        out[1] = c * z[1] + s * z[2]
        out[2] = -s * z[1] + c * z[2]
        out[4] = c * a + s * b
        out[5] = -s * a + c * b
        out[7] = z[7] - 0.125 * f * f * (z[1] ** 2 + z[2] ** 2)
        return out

    def jac(z):
        t, x, y, p, u, v = z[:6]
        n = z.shape[1]
        c, s = np.cos(fh * t), np.sin(fh * t)
        m = np.zeros((9, 9, n))
        for k in (0, 3, 6, 7, 8):
            m[k, k] = 1.0
        xt, yt = c * x - s * y, s * x + c * y
        # d/dt R = fh J R
        m[1, 0], m[2, 0] = -fh * yt, fh * xt
        m[1, 1], m[1, 2], m[2, 1], m[2, 2] = c, -s, s, c
        ru, rv = c * u - s * v, s * u + c * v
        m[4, 0] = -fh * rv - fh * fh * xt
        m[5, 0] = fh * ru - fh * fh * yt
        m[4, 1], m[4, 2] = -fh * s, -fh * c
        m[5, 1], m[5, 2] = fh * c, -fh * s
        m[4, 4], m[4, 5], m[5, 4], m[5, 5] = c, -s, s, c
        m[7, 1], m[7, 2] = 0.25 * f * f * x, 0.25 * f * f * y
        return m

    return GroupMap(forward, inverse, jac, f"derotation(f={f:g})")


def orthogonal(angle: float, reflect: bool) -> np.ndarray:
    """``R(angle) diag(1, -1 if reflect else 1)``; exactly orthogonal up to rounding of cos/sin."""
    return _rot(angle) @ np.diag([1.0, -1.0 if reflect else 1.0])


@dataclass(frozen=True)
class SymmetryParams:
    eps0: float = 0.0
    eps1: float = 1.0
    eps2: float = 1.0
    eps3: float = 1.0
    eps4: float = 0.0
    beta: tuple = (Poly([0.0]), Poly([0.0]))
    alpha: Fn1D = Poly([0.0])
    angle: float = 0.0
    reflect: bool = False

    def __post_init__(self):
        if self.eps1 == 0:
            raise DomainError("eps1 (time scale) must be nonzero")
        if not self.eps2 > 0:
            raise DomainError(f"eps2 (horizontal scale) must be positive, got {self.eps2}")
        if not self.eps3 > 0:
            raise DomainError(f"eps3 (pressure scale) must be positive, got {self.eps3}")
        if len(self.beta) != 2:
            raise ValueError("beta must be a pair of functions")

    @property
    def O(self) -> np.ndarray:
        return orthogonal(self.angle, self.reflect)

    @classmethod
    def from_config(cls, cfg: dict) -> "SymmetryParams":
        cfg = dict(cfg)
        known = {"eps0", "eps1", "eps2", "eps3", "eps4", "beta", "alpha", "angle", "reflect"}
        unknown = set(cfg) - known
        if unknown:
            raise ValueError(f"unknown SymmetryParams keys: {sorted(unknown)}")
        if "beta" in cfg:
            cfg["beta"] = tuple(from_config(b) for b in cfg["beta"])
        if "alpha" in cfg:
            cfg["alpha"] = from_config(cfg["alpha"])
        return cls(**cfg)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SymmetryParams":
        """Random valid parameters with nontrivial polynomial/trigonometric beta and alpha."""
        sign = rng.choice([-1.0, 1.0])
        beta = (Poly(rng.uniform(-1, 1, 4)),
                from_config({"sin": {"amp": float(rng.uniform(-1, 1)),
                                     "freq": float(rng.uniform(0.5, 2)),
                                     "phase": float(rng.uniform(0, 3))}}))
        return cls(eps0=float(rng.uniform(-1, 1)), eps1=float(sign * rng.uniform(0.5, 2)),
                   eps2=float(rng.uniform(0.5, 2)), eps3=float(rng.uniform(0.5, 2)),
                   eps4=float(rng.uniform(-1, 1)), beta=beta, alpha=Poly(rng.uniform(-1, 1, 3)),
                   angle=float(rng.uniform(0, 2 * math.pi)), reflect=bool(rng.integers(2)))


PERTURBABLE = ("omega-scale", "T-scale", "v-scale", "phi-scale")


def symmetry_map(params: SymmetryParams, consts: PhysConsts = PhysConsts(),
                 perturb: Optional[dict] = None) -> GroupMap:
    """General element of the point-symmetry group of the resting-frame system.

    ``perturb`` multiplies one of the dependent-variable scale factors (keys
    in :data:`PERTURBABLE`); it exists for negative controls only.
    """
    perturb = dict(perturb or {})
    bad = set(perturb) - set(PERTURBABLE)
    if bad:
        raise ValueError(f"unknown perturbation components {sorted(bad)}; known: {PERTURBABLE}")
    e0, e1, e2, e3, e4 = params.eps0, params.eps1, params.eps2, params.eps3, params.eps4
    O = params.O
    b1, b2 = params.beta
    alpha = params.alpha
    cp, kap = consts.c_p, consts.kappa
    sv = e2 / e1 * perturb.get("v-scale", 1.0)
    sw = e3 / e1 * perturb.get("omega-scale", 1.0)
    sphi = (e2 / e1) ** 2 * perturb.get("phi-scale", 1.0)
    sT = (e2 / e1) ** 2 * perturb.get("T-scale", 1.0)
    c_acc = e2 / e1**2

    def beta(t, n):
        return np.stack([b1(t, n), b2(t, n)])

    def forward(z):
        t, x, y, p, u, v, w, phi, T = z
        xy, uv = O @ np.stack([x, y]), O @ np.stack([u, v])
        pk = p**kap
        out = np.empty_like(z)
        out[0] = e1 * t + e0
        out[1:3] = e2 * xy + beta(t, 0)
        out[3] = e3 * p
        out[4:6] = sv * uv + beta(t, 1) / e1
        out[6] = sw * w
        out[7] = sphi * phi + e4 * cp * pk - c_acc * np.sum(beta(t, 2) * xy, axis=0) + alpha(t)
        out[8] = sT * T - e4 * pk
        return out

    def inverse(z):
        tt, xt, yt, pt, ut, vt, wt, phit, Tt = z
        t = (tt - e0) / e1
        p = pt / e3
        xy_rot = (np.stack([xt, yt]) - beta(t, 0)) / e2   # = O x
        uv_rot = (np.stack([ut, vt]) - beta(t, 1) / e1) / sv
        pk = p**kap
        out = np.empty_like(z)
        out[0] = t
        out[1:3] = O.T @ xy_rot
        out[3] = p
        out[4:6] = O.T @ uv_rot
        out[6] = wt / sw
        out[7] = (phit - e4 * cp * pk + c_acc * np.sum(beta(t, 2) * xy_rot, axis=0) - alpha(t)) / sphi
        out[8] = (Tt + e4 * pk) / sT
        return out

    def jac(z):
        t, x, y, p = z[:4]
        n = z.shape[1]
        xy = O @ np.stack([x, y])
        m = np.zeros((9, 9, n))
        m[0, 0] = e1
        m[1:3, 0] = beta(t, 1)
        m[1:3, 1:3] = e2 * O[:, :, None]
        m[3, 3] = e3
        m[4:6, 0] = beta(t, 2) / e1
        m[4:6, 4:6] = sv * O[:, :, None]
        m[6, 6] = sw
        m[7, 0] = -c_acc * np.sum(beta(t, 3) * xy, axis=0) + alpha(t, 1)
        m[7, 1:3] = -c_acc * (O.T @ beta(t, 2))
        m[7, 3] = e4 * cp * kap * p ** (kap - 1)
        m[7, 7] = sphi
        m[8, 3] = -e4 * kap * p ** (kap - 1)
        m[8, 8] = sT
        return m

    tag = "" if not perturb else f" perturbed{sorted(perturb.items())}"
    return GroupMap(forward, inverse, jac, "symmetry" + tag)


def _diagonal_map(signs, name) -> GroupMap:
    d = np.asarray(signs, dtype=float)[:, None]

    def apply(z):
        return d * z

    return GroupMap(apply, apply,
                    lambda z: np.broadcast_to(np.diag(d[:, 0])[:, :, None], (9, 9, z.shape[1])).copy(),
                    name)


def discrete_involutions() -> tuple[GroupMap, GroupMap]:
    """Time reversal ``(t,u,v,omega) -> -(t,u,v,omega)`` and the mirror ``(x,u) -> -(x,u)``."""
    return (_diagonal_map([-1, 1, 1, 1, -1, -1, -1, 1, 1], "time-reversal"),
            _diagonal_map([1, -1, 1, 1, -1, 1, 1, 1, 1], "mirror-x"))


def pushforward_field(g: GroupMap, field: StateField, domain: Optional[Box] = None) -> StateField:
    """Transport a solution: ``s~(z~)`` is the dependent part of ``g(z, s(z))``.

    Partials follow from the chain rule with the closed-form Jacobian, so an
    exact-derivative field stays exact. With ``domain`` given, target points
    whose preimage leaves it raise :class:`DomainError`.
    """

    def preimage(pts):
        z = g.base_inverse(pts)
        check_pressure(z)
        if domain is not None:
            lo, hi = domain.bounds().T
            tol = 1e-12 * np.maximum(1.0, np.abs(hi))
            if np.any(z < (lo - tol)[:, None]) or np.any(z > (hi + tol)[:, None]):
                raise DomainError(f"target point outside the image of the domain of {field.name}")
        return z

    def value(pts):
        z = preimage(pts)
        return g.forward(np.vstack([z, field.value(z)]))[4:]

    def partials(pts):
        z = preimage(pts)
        full = np.vstack([z, field.value(z)])
        m = g.jacobian(full)
        d = field.partials(z)
        total = m[4:, :4] + np.einsum("abn,bkn->akn", m[4:, 4:], d)
        base_inv = np.linalg.inv(np.moveaxis(m[:4, :4], 2, 0))
        return np.einsum("akn,nkj->ajn", total, base_inv)

    exact = field.derivative_mode == "exact"
    return StateField(value, partials if exact else None, field.h, f"{g.name}[{field.name}]")


def pushforward_heating(g: GroupMap, J: HeatingField) -> HeatingField:
    """Heating rate carried along a projectable map: ``J~ = J o base^-1``."""
    return lambda pts: J(g.base_inverse(pts))


def pushforward_scalar(g: GroupMap, S: Callable) -> Callable:
    """A scalar function of (t,x,y,p) carried unchanged along the base map."""
    return lambda pts: S(g.base_inverse(pts))


def pushforward_vf(g: GroupMap, vf: VectorField, z, cond_max: float = 1e12) -> np.ndarray:
    """Image of the vector ``vf(z)`` at ``g(z)``: ``(dg/dz) vf(z)``, shape ``(9, n)``."""
    z = _as9(z)
    m = g.jacobian(z)
    mats = np.moveaxis(m, 2, 0)
    cond = np.linalg.cond(mats)
    if not np.all(np.isfinite(cond)) or np.any(cond > cond_max):
        raise DomainError(f"singular Jacobian of {g.name} (condition number {np.max(cond):.3e})")
    return np.einsum("ijn,jn->in", m, vf(z))


def vf_at_image(vf: VectorField, g: GroupMap, z) -> np.ndarray:
    """``vf`` evaluated at the image points ``g(z)``; companion of :func:`pushforward_vf`."""
    return vf(g.forward(z))


def polar(x, y, u, v):
    """``(r, theta, u_r, u_theta)`` of a horizontal position and velocity."""
    r = np.hypot(x, y)
    th = np.arctan2(y, x)
    c, s = np.cos(th), np.sin(th)
    return r, th, c * u + s * v, -s * u + c * v
