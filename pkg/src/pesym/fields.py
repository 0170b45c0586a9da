"""Solution-candidate fields over (t, x, y, p).

Points are stored column-wise: an array of shape ``(4, n)`` with rows
``t, x, y, p``. A field evaluates to ``(5, n)`` values (rows ``u, v,
omega, phi, T``) and ``(5, 4, n)`` first partials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import functions as fns
from .errors import DomainError
from .functions import Fn1D, Poly
from .quadrature import simpson_doubling

COMPONENTS = ("u", "v", "omega", "phi", "T")
VARIABLES = ("t", "x", "y", "p")


@dataclass(frozen=True)
class Box:
    t: tuple = (0.0, 1.0)
    x: tuple = (-1.0, 1.0)
    y: tuple = (-1.0, 1.0)
    p: tuple = (0.2, 1.0)

    def __post_init__(self):
        for name in VARIABLES:
            lo, hi = getattr(self, name)
            if not hi > lo:
                raise DomainError(f"empty box along {name}: {lo}..{hi}")
        if self.p[0] <= 0:
            raise DomainError(f"pressure range must be positive, got p_min={self.p[0]}")

    def bounds(self):
        return np.array([self.t, self.x, self.y, self.p], dtype=float)


DEFAULT_BOX = Box()


@dataclass(frozen=True)
class PhysConsts:
    f: float = 0.0
    R: float = 1.0
    c_p: float = 3.5
    allow_kappa_one: bool = False

    def __post_init__(self):
        if not (self.R > 0 and self.c_p > 0):
            raise DomainError(f"R and c_p must be positive (R={self.R}, c_p={self.c_p})")
        if self.c_p < self.R or (self.c_p == self.R and not self.allow_kappa_one):
            raise DomainError(
                f"c_p must exceed R (kappa<1); c_p=R needs allow_kappa_one (R={self.R}, c_p={self.c_p})")

    @property
    def kappa(self) -> float:
        return self.R / self.c_p

    @property
    def kappa_exact(self) -> Fraction:
        return Fraction(self.R) / Fraction(self.c_p)

    def with_f(self, f: float) -> "PhysConsts":
        return PhysConsts(f, self.R, self.c_p, self.allow_kappa_one)


def as_points(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] != 4:
        raise ValueError(f"points must have shape (4, n), got {pts.shape}")
    return pts


def check_pressure(pts: np.ndarray):
    if np.any(pts[3] <= 0):
        raise DomainError(f"nonpositive pressure in requested domain (min p = {pts[3].min()})")


@dataclass(frozen=True)
class StateField:
    """A field with values and (optionally closed-form) first partials.

    Without ``partials_fn`` the partials fall back to central differences
    with step ``h * max(1, |coordinate|)``.
    """

    value_fn: Callable[[np.ndarray], np.ndarray]
    partials_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    h: float = 1e-5
    name: str = "field"

    @property
    def derivative_mode(self) -> str:
        return "exact" if self.partials_fn is not None else "fd"

    def value(self, pts) -> np.ndarray:
        pts = as_points(pts)
        check_pressure(pts)
        return np.asarray(self.value_fn(pts), dtype=float)

    def partials(self, pts) -> np.ndarray:
        pts = as_points(pts)
        check_pressure(pts)
        if self.partials_fn is None:
            return eval_partials_fd(self, pts, self.h)
        return np.asarray(self.partials_fn(pts), dtype=float)

    def with_fd(self, h: float = 1e-5) -> "StateField":
        return StateField(self.value_fn, None, h, self.name + "[fd]")


HeatingField = Callable[[np.ndarray], np.ndarray]


def zero_heating(pts) -> np.ndarray:
    return np.zeros(as_points(pts).shape[1])


# central-difference weights for offsets 1..m (antisymmetric stencils)
_FD_WEIGHTS = {
    2: (0.5,),
    4: (2.0 / 3.0, -1.0 / 12.0),
    6: (3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0),
}


def eval_partials_fd(field: StateField, pts, h: float = 1e-5, order: int = 2) -> np.ndarray:
    """All 20 first partials by central differences, error O(h^order)."""
    pts = as_points(pts)
    weights = _FD_WEIGHTS[order]
    m = len(weights)
    steps = h * np.maximum(1.0, np.abs(pts))
    if np.any(pts[3] - m * steps[3] <= 0):
        raise DomainError("finite-difference stencil leaves the domain p > 0")
    n = pts.shape[1]
    # one batched evaluation of every shifted stencil point
    shifted = np.repeat(pts[None], 8 * m, axis=0)
    for k in range(4):
        for j in range(m):
            shifted[(2 * k) * m + j, k] += (j + 1) * steps[k]
            shifted[(2 * k + 1) * m + j, k] -= (j + 1) * steps[k]
    vals = field.value_fn(np.concatenate(list(shifted), axis=1)).reshape(5, 8, m, n)
    out = np.zeros((5, 4, n))
    for k in range(4):
        for j, w in enumerate(weights):
            out[:, k] += w * (vals[:, 2 * k, j] - vals[:, 2 * k + 1, j])
        out[:, k] /= steps[k]
    return out


def sample_points(seed: int, n: int, box: Box = DEFAULT_BOX) -> np.ndarray:
    """Deterministic uniform samples inside ``box``; shape ``(4, n)``."""
    if n <= 0:
        raise ValueError("need at least one point")
    rng = np.random.default_rng(seed)
    lo, hi = box.bounds().T
    return lo[:, None] + (hi - lo)[:, None] * rng.random((4, n))


def hydrostatic_geopotential(T0: Fn1D, p_ref: float, R: float, p, tol: float = 1e-12):
    """phi(p) = -R * int_{p_ref}^{p} T0(s)/s ds by Simpson with panel doubling."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or p_ref <= 0:
        raise DomainError("nonpositive pressure in hydrostatic quadrature")
    return -R * simpson_doubling(lambda s: T0(s) / s, p_ref, p, tol=tol)


def make_stratified(u0: Fn1D, v0: Fn1D, T0: Fn1D, p_ref: float = 1.0,
                    consts: PhysConsts = PhysConsts()) -> StateField:
    """Horizontally homogeneous resting-frame state in hydrostatic balance."""
    if p_ref <= 0:
        raise DomainError(f"p_ref must be positive, got {p_ref}")
    R = consts.R

    def value(pts):
        p = pts[3]
        zero = np.zeros_like(p)
        return np.stack([u0(p), v0(p), zero, hydrostatic_geopotential(T0, p_ref, R, p), T0(p)])

    def partials(pts):
        p = pts[3]
        out = np.zeros((5, 4, p.size))
        out[0, 3] = u0(p, 1)
        out[1, 3] = v0(p, 1)
        out[3, 3] = -R * T0(p) / p
        out[4, 3] = T0(p, 1)
        return out

    return StateField(value, partials, name="stratified")


def make_inertial(u0: Fn1D, v0: Fn1D, T0: Fn1D, p_ref: float = 1.0,
                  f: float = 1.0, consts: PhysConsts = PhysConsts()) -> StateField:
    """Inertial oscillation in a frame rotating with Coriolis parameter ``f``."""
    if p_ref <= 0:
        raise DomainError(f"p_ref must be positive, got {p_ref}")
    R = consts.R
    fh = 0.5 * f

    def value(pts):
        t, x, y, p = pts
        c, s = np.cos(fh * t), np.sin(fh * t)
        a, b = u0(p), v0(p)
        phi = hydrostatic_geopotential(T0, p_ref, R, p) - f * f / 8.0 * (x * x + y * y)
        return np.stack([c * a + s * b + fh * y, -s * a + c * b - fh * x,
                         np.zeros_like(p), phi, T0(p)])

    def partials(pts):
        t, x, y, p = pts
        c, s = np.cos(fh * t), np.sin(fh * t)
        a, b = u0(p), v0(p)
        da, db = u0(p, 1), v0(p, 1)
        out = np.zeros((5, 4, p.size))
        out[0, 0] = fh * (-s * a + c * b)
        out[0, 2] = fh
        out[0, 3] = c * da + s * db
        out[1, 0] = -fh * (c * a + s * b)
        out[1, 1] = -fh
        out[1, 3] = -s * da + c * db
        out[3, 1] = -f * f * x / 4.0
        out[3, 2] = -f * f * y / 4.0
        out[3, 3] = -R * T0(p) / p
        out[4, 3] = T0(p, 1)
        return out

    return StateField(value, partials, name=f"inertial(f={f})")


def make_advected(u0: Fn1D, v0: Fn1D, T0: Poly, chi: float = 0.5, p_ref: float = 1.0,
                  consts: PhysConsts = PhysConsts()) -> StateField:
    """Stratification advected by a uniform pressure velocity ``omega = chi``.

    With ``xi = p - chi t``: ``u = u0(xi)``, ``v = v0(xi)``,
    ``T = p^kappa T0(xi)`` and ``phi = -R int_{p_ref}^p s^(kappa-1) T0(s - chi t) ds``
    evaluated in closed form (``T0`` must be a polynomial).
    """
    if not isinstance(T0, Poly):
        raise TypeError("make_advected needs a polynomial T0 for the closed-form geopotential")
    if p_ref <= 0:
        raise DomainError(f"p_ref must be positive, got {p_ref}")
    R, kap = consts.R, consts.kappa
    dT0 = Poly(np.polynomial.polynomial.polyder(T0.coeffs) if len(T0.coeffs) > 1 else [0.0])

    def integral(q: Poly, t, p):
        # int_{p_ref}^p s^(kap-1) q(s - chi t) ds, binomial expansion in s
        total = np.zeros_like(p)
        shift = -chi * t
        for k, ck in enumerate(q.coeffs):
            if ck == 0.0:
                continue
            for j in range(k + 1):
                e = kap + j
                total = total + ck * math.comb(k, j) * shift ** (k - j) * (p**e - p_ref**e) / e
        return total

    def value(pts):
        t, _, _, p = pts
        xi = p - chi * t
        return np.stack([u0(xi), v0(xi), np.full_like(p, chi),
                         -R * integral(T0, t, p), p**kap * T0(xi)])

    def partials(pts):
        t, _, _, p = pts
        xi = p - chi * t
        out = np.zeros((5, 4, p.size))
        for row, prof in ((0, u0), (1, v0)):
            d = prof(xi, 1)
            out[row, 0] = -chi * d
            out[row, 3] = d
        out[3, 0] = R * chi * integral(dT0, t, p)
        out[3, 3] = -R * p ** (kap - 1) * T0(xi)
        out[4, 0] = -chi * p**kap * T0(xi, 1)
        out[4, 3] = kap * p ** (kap - 1) * T0(xi) + p**kap * T0(xi, 1)
        return out

    return StateField(value, partials, name=f"advected(chi={chi})")


# Default profiles of the named built-ins; chosen nontrivial so every term of
# the equations is exercised.
DEFAULT_PROFILES = {
    "stratified": {"u0": {"poly": [0.5, 1.0]}, "v0": {"poly": [-0.2, 0.0, 0.8]},
                   "T0": {"poly": [1.0, 0.5]}, "p_ref": 1.0},
    "inertial": {"u0": {"poly": [0.5, 1.0]}, "v0": {"poly": [-0.2, 0.0, 0.8]},
                 "T0": {"poly": [1.0, 0.5]}, "p_ref": 1.0, "f": 1.0},
    "manufactured-polynomial": {"u0": {"poly": [0.0, 2.0]}, "v0": {"poly": [0.3, -1.0, 0.5]},
                                "T0": {"poly": [1.0, 0.5]}, "chi": 0.5, "p_ref": 1.0},
}


def field_from_config(cfg, consts: PhysConsts = PhysConsts()) -> StateField:
    """Construct a named built-in field from a JSON-compatible block.

    ``cfg`` is either a built-in name or ``{"name": ..., <params>}``; missing
    parameters take the defaults in :data:`DEFAULT_PROFILES`.
    """
    if isinstance(cfg, str):
        cfg = {"name": cfg}
    cfg = dict(cfg)
    name = cfg.pop("name", None)
    mode = cfg.pop("mode", "exact")
    if name not in DEFAULT_PROFILES:
        raise ValueError(f"unknown field {name!r}; known: {sorted(DEFAULT_PROFILES)}")
    params = dict(DEFAULT_PROFILES[name])
    unknown = set(cfg) - set(params)
    if unknown:
        raise ValueError(f"unknown keys for field {name!r}: {sorted(unknown)}")
    params.update(cfg)
    u0, v0, T0 = (fns.from_config(params[k]) for k in ("u0", "v0", "T0"))
    if name == "stratified":
        fld = make_stratified(u0, v0, T0, params["p_ref"], consts)
    elif name == "inertial":
        fld = make_inertial(u0, v0, T0, params["p_ref"], params["f"], consts)
    else:
        fld = make_advected(u0, v0, T0, params["chi"], params["p_ref"], consts)
    if mode == "fd":
        return fld.with_fd()
    if mode != "exact":
        raise ValueError(f"mode must be 'exact' or 'fd', got {mode!r}")
    return fld
