"""Group-invariant solutions for the two-dimensional abelian subalgebra
``<X(gamma) + a1 S, X(sigma) + a2 S>`` of the resting-frame algebra.

Ansatz, with ``w_perp = (w2, -w1)``, ``delta = gamma . sigma_perp`` and
``b = a1 sigma_perp - a2 gamma_perp``::

    v     = v^ + H x,          H x = ((sigma_perp . x) gamma_t - (gamma_perp . x) sigma_t) / delta
    omega = omega^ = -(delta_t / delta) p + chi(t)
    phi   = phi^ + c_p p^kappa (b . x) / delta
            - (sigma_perp . x)(gamma_tt . x) / (2 delta) + (gamma_perp . x)(sigma_tt . x) / (2 delta)
    T     = p^kappa T^ - p^kappa (b . x) / delta

Hatted quantities depend on ``(t, p)`` only and satisfy the reduced system::

    v^_t + omega^ v^_p + H v^ + c_p p^kappa b / delta = 0
    phi^_p + R p^(kappa - 1) T^ = 0
    delta_t / delta + omega^_p = 0
    T^_t + omega^ T^_p - (b . v^) / delta = 0

Along the characteristics ``p(tau) = (xi + theta(tau)) / delta(tau)`` with
``xi = p delta(t) - theta(t)`` and ``theta = int_{t0}^t chi delta`` the
system is solved by ``v^ = G (v0(xi) - c_p W)``, ``T^ = T0(xi) + Theta``
where ``G_t = -H G``, ``W' = p(tau)^kappa G^-1 b / delta`` and
``Theta' = (b / delta) . v^``. The geopotential is
``phi^ = -R int_{p0}^p s^(kappa-1) T^(t, s) ds``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import functions as fns
from .errors import DomainError
from .fields import _FD_WEIGHTS, DEFAULT_BOX, Box, PhysConsts, StateField, as_points, check_pressure
from .functions import Fn1D
from .quadrature import adaptive_simpson, gauss_legendre, rk4, steps_for
from .residual import ResidualNorms, residual_norms
from .transforms import derotation, invert, pushforward_field

GAUSS_NODES = 24


@dataclass(frozen=True)
class ReductionSpec:
    gamma: tuple
    sigma: tuple
    a1: float = 0.0
    a2: float = 0.0
    chi: Fn1D = fns.Poly([0.0])
    v0: tuple = (fns.Poly([0.0]), fns.Poly([0.0]))
    T0: Fn1D = fns.Poly([1.0])
    t0: float = 0.0
    p0: float = 1.0
    consts: PhysConsts = PhysConsts()
    box: Box = DEFAULT_BOX
    compat_tol: float = 1e-10

    def __post_init__(self):
        if self.p0 <= 0:
            raise DomainError(f"anchor pressure p0 must be positive, got {self.p0}")
        report = check_compatibility(self)
        if report.max_defect > self.compat_tol:
            raise DomainError(
                f"gamma_tt.sigma - sigma_tt.gamma does not vanish (max {report.max_defect:.3e}); "
                "X(gamma), X(sigma) do not commute")
        if report.min_delta <= 0:
            raise DomainError(f"delta must stay positive on the t-range (min {report.min_delta:.3e})")

    @property
    def t_range(self) -> tuple:
        lo, hi = self.box.t
        return (min(lo, self.t0), max(hi, self.t0))

    # -- time-dependent coefficients, vectorised over t ----------------------
    def pair(self, w, t, n=0) -> np.ndarray:
        return np.stack([w[0](t, n), w[1](t, n)])

    def delta(self, t, n: int = 0) -> np.ndarray:
        """``delta`` (n=0) or its first derivative (n=1)."""
        g, s = self.pair(self.gamma, t), self.pair(self.sigma, t)
        if n == 0:
            return g[0] * s[1] - g[1] * s[0]
        gt, st = self.pair(self.gamma, t, 1), self.pair(self.sigma, t, 1)
        return gt[0] * s[1] + g[0] * st[1] - gt[1] * s[0] - g[1] * st[0]

    def b(self, t) -> np.ndarray:
        g, s = self.pair(self.gamma, t), self.pair(self.sigma, t)
        return self.a1 * np.stack([s[1], -s[0]]) - self.a2 * np.stack([g[1], -g[0]])

    def H(self, t) -> np.ndarray:
        """``H`` as an array of shape ``(2, 2, n)``."""
        t = np.atleast_1d(np.asarray(t, float))
        g, s = self.pair(self.gamma, t), self.pair(self.sigma, t)
        gt, st = self.pair(self.gamma, t, 1), self.pair(self.sigma, t, 1)
        sp = np.stack([s[1], -s[0]])
        gp = np.stack([g[1], -g[0]])
        d = self.delta(t)
        return (gt[:, None] * sp[None] - st[:, None] * gp[None]) / d

    def omega_hat(self, t, p) -> np.ndarray:
        return -self.delta(t, 1) / self.delta(t) * p + self.chi(t)

    @classmethod
    def from_config(cls, cfg: dict, consts: PhysConsts = PhysConsts(), box: Box = DEFAULT_BOX):
        cfg = dict(cfg)
        if "preset" in cfg:
            base = dict(PRESETS[cfg.pop("preset")])
            base.update(cfg)
            cfg = base
        known = {"gamma", "sigma", "a1", "a2", "chi", "v0", "T0", "t0", "p0"}
        unknown = set(cfg) - known
        if unknown:
            raise ValueError(f"unknown reduction spec keys: {sorted(unknown)}")
        for key in ("gamma", "sigma"):
            if key not in cfg:
                raise ValueError(f"reduction spec needs {key!r}")
        kw = {"gamma": fns.pair_from_config(cfg["gamma"]), "sigma": fns.pair_from_config(cfg["sigma"])}
        if "v0" in cfg:
            kw["v0"] = fns.pair_from_config(cfg["v0"])
        for key in ("chi", "T0"):
            if key in cfg:
                kw[key] = fns.from_config(cfg[key])
        for key in ("a1", "a2", "t0", "p0"):
            if key in cfg:
                kw[key] = float(cfg[key])
        return cls(consts=consts, box=box, **kw)


PRESETS = {
    # constant frame: recovers a horizontally homogeneous stratified state
    "stratified": {"gamma": [1, 0], "sigma": [0, 1], "v0": [{"poly": [0.5, 1.0]}, {"poly": [-0.2, 0.0, 0.8]}],
                   "T0": {"poly": [1.0, 0.5]}},
    # rotating frame vectors: time-periodic rotating shear
    "rotating-shear": {"gamma": [{"cos": {}}, {"sin": {}}],
                       "sigma": [{"scale": -1.0, "of": {"sin": {}}}, {"cos": {}}],
                       "v0": [{"poly": [0.0, 1.0]}, 0], "T0": 0},
    # S-forced flow with constant frame
    "s-forced": {"gamma": [1, 0], "sigma": [0, 1], "a1": 1.0, "v0": [0, 0], "T0": 0},
    # time-dependent delta, vertical drift and both S-couplings
    "general": {"gamma": [1, 0], "sigma": [{"poly": [0.0, 1.0]}, {"poly": [1.0, 1.0]}],
                "a1": 0.5, "a2": -0.3, "chi": {"poly": [0.1, 0.05]},
                "v0": [{"poly": [0.0, 1.0]}, {"poly": [0.5, 0.0, -1.0]}], "T0": {"poly": [1.0, 0.5]}},
}


def spec_from_preset(name: str, consts: PhysConsts = PhysConsts(), box: Box = DEFAULT_BOX,
                     **overrides) -> ReductionSpec:
    if name not in PRESETS:
        raise ValueError(f"unknown reduction preset {name!r}; known: {sorted(PRESETS)}")
    cfg = dict(PRESETS[name])
    cfg.update(overrides)
    return ReductionSpec.from_config(cfg, consts, box)


@dataclass(frozen=True)
class CompatibilityReport:
    max_defect: float
    min_delta: float

    def as_dict(self):
        return {"max_defect": self.max_defect, "min_delta": self.min_delta}


def check_compatibility(spec: ReductionSpec, n_samples: int = 401) -> CompatibilityReport:
    """Sampled ``max |gamma_tt.sigma - sigma_tt.gamma|`` and ``min delta`` over the t-range."""
    t = np.linspace(*spec.t_range, n_samples)
    g, s = spec.pair(spec.gamma, t), spec.pair(spec.sigma, t)
    gtt, stt = spec.pair(spec.gamma, t, 2), spec.pair(spec.sigma, t, 2)
    defect = np.sum(gtt * s, axis=0) - np.sum(stt * g, axis=0)
    return CompatibilityReport(float(np.max(np.abs(defect))), float(np.min(spec.delta(t))))


# -- fundamental matrix -------------------------------------------------------
@dataclass(frozen=True)
class GTable:
    """``G`` on a uniform grid with cubic Hermite dense output."""

    nodes: np.ndarray
    values: np.ndarray    # (m, 2, 2)
    slopes: np.ndarray    # (m, 2, 2)

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, float))
        nodes = self.nodes
        if np.any(t < nodes[0] - 1e-12) or np.any(t > nodes[-1] + 1e-12):
            raise DomainError("time outside the tabulated range of G")
        i = np.clip(np.searchsorted(nodes, t, side="right") - 1, 0, len(nodes) - 2)
        h = nodes[i + 1] - nodes[i]
        s = ((t - nodes[i]) / h)[:, None, None]
        h = h[:, None, None]
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return (h00 * self.values[i] + h10 * h * self.slopes[i]
                + h01 * self.values[i + 1] + h11 * h * self.slopes[i + 1])

    def inverse_defect(self) -> float:
        """max ||G G^-1 - I|| over the stored nodes."""
        inv = np.linalg.inv(self.values)
        return float(np.max(np.abs(self.values @ inv - np.eye(2))))


def solve_G(spec: ReductionSpec, t_range: Optional[tuple] = None, steps: int = 1000) -> GTable:
    """Integrate ``G_t = -H G``, ``G(t0) = I`` with RK4 across ``t_range``.

    ``steps`` is the number of steps per unit time (at least 100).
    """
    if steps < 100:
        raise ValueError(f"solve_G needs at least 100 steps per unit time, got {steps}")
    lo, hi = t_range or spec.t_range
    lo, hi = min(lo, spec.t0), max(hi, spec.t0)

    def rhs(t, y):
        (G,) = y
        d = spec.delta(np.atleast_1d(t))
        if np.any(d <= 0):
            raise DomainError("delta reached zero while integrating G")
        Hm = np.moveaxis(spec.H(t), 2, 0)
        return (-(Hm @ G),)

    def leg(t_end):
        n = steps_for(t_end - spec.t0, steps, minimum=1)
        nodes = np.linspace(spec.t0, t_end, n + 1)
        out = [np.eye(2)[None]]
        G = np.eye(2)[None]
        for a, b in zip(nodes[:-1], nodes[1:]):
            (G,) = rk4(rhs, (G,), np.array([a]), np.array([b]), 1)
            out.append(G)
        return nodes, np.concatenate(out)

    parts_t, parts_G = [], []
    if lo < spec.t0:
        nb, Gb = leg(lo)
        parts_t.append(nb[::-1][:-1])
        parts_G.append(Gb[::-1][:-1])
    nf, Gf = leg(hi) if hi > spec.t0 else (np.array([spec.t0]), np.eye(2)[None])
    parts_t.append(nf)
    parts_G.append(Gf)
    nodes = np.concatenate(parts_t)
    values = np.concatenate(parts_G)
    slopes = -(np.moveaxis(spec.H(nodes), 2, 0) @ values)
    return GTable(nodes, values, slopes)


def theta(spec: ReductionSpec, t: float, tol: float = 1e-12) -> float:
    """``int_{t0}^t chi delta`` by adaptive Simpson."""
    if t == spec.t0:
        return 0.0
    lo, hi = sorted((spec.t0, t))
    if np.min(spec.delta(np.linspace(lo, hi, 201))) <= 0:
        raise DomainError("delta is not positive between t0 and t")
    val = adaptive_simpson(lambda s: float(spec.chi(s) * spec.delta(np.asarray(s))), spec.t0, t, tol)
    return float(val)


# -- assembly -----------------------------------------------------------------
class ReducedSolution:
    """Hatted quantities by one vectorised RK4 sweep per evaluation.

    Each target ``(t, p)`` integrates its own characteristic from ``t0``
    with ``steps`` uniform steps, so the discrete solution is a smooth
    function of ``(t, p)``.
    """

    def __init__(self, spec: ReductionSpec, steps_per_unit: int = 200, gauss_nodes: int = GAUSS_NODES):
        self.spec = spec
        span = max(abs(spec.t_range[0] - spec.t0), abs(spec.t_range[1] - spec.t0))
        self.steps = steps_for(span, steps_per_unit)
        self.steps_per_unit = steps_per_unit
        self.gauss_nodes = gauss_nodes
        self._guard_domain()

    def _guard_domain(self):
        """Reject specs whose characteristics leave p > 0 inside the box."""
        spec = self.spec
        t = np.linspace(*spec.box.t, 9)
        p = np.array([spec.box.p[0], spec.p0, spec.box.p[1]])
        tt, pp = np.meshgrid(t, p)
        self.hat(tt.ravel(), pp.ravel())

    def _characteristics(self, t, p):
        """``v^`` and ``T^`` at times ``t`` (n,) and pressures ``p`` (n, k).

        All characteristics ending at the same ``t`` share one tau-grid, so
        ``theta``, ``G`` and the time coefficients are integrated once per row.
        """
        spec = self.spec
        t0 = np.full_like(t, spec.t0)
        kap, cp = spec.consts.kappa, spec.consts.c_p

        def rhs_theta(tau, y):
            return (spec.chi(tau) * spec.delta(tau),)

        (th_t,) = rk4(rhs_theta, (np.zeros_like(t),), t0, t, self.steps)
        xi = p * spec.delta(t)[:, None] - th_t[:, None]
        v0 = np.stack([spec.v0[0](xi), spec.v0[1](xi)], axis=-1)      # (n, k, 2)

        def rhs(tau, y):
            th, G, W, Th = y
            d = spec.delta(tau)
            arg = xi + th[:, None]
            if np.any(arg <= 0):
                raise DomainError("characteristic reaches p <= 0 (xi + theta(tau) <= 0)")
            ptau = arg / d[:, None]
            Hm = np.moveaxis(spec.H(tau), 2, 0)
            bt = spec.b(tau).T / d[:, None]               # (n, 2)
            ginv_b = np.linalg.solve(G, bt[..., None])[..., 0]
            gt_b = (np.swapaxes(G, 1, 2) @ bt[..., None])[..., 0]   # (b/delta) . G w = (G^T b/delta) . w
            w = v0 - cp * W
            return (spec.chi(tau) * d,
                    -(Hm @ G),
                    ptau[..., None] ** kap * ginv_b[:, None, :],
                    w[..., 0] * gt_b[:, None, 0] + w[..., 1] * gt_b[:, None, 1])

        n, k = p.shape
        y0 = (np.zeros(n), np.broadcast_to(np.eye(2), (n, 2, 2)).copy(), np.zeros((n, k, 2)), np.zeros((n, k)))
        _, G, W, Th = rk4(rhs, y0, t0, t, self.steps)
        vhat = np.swapaxes(G @ np.swapaxes(v0 - cp * W, 1, 2), 1, 2)
        That = spec.T0(xi) + Th
        return vhat, That

    def hat(self, t, p) -> np.ndarray:
        """Rows ``v^1, v^2, omega^, phi^, T^`` at the given ``(t, p)``; shape ``(5, n)``."""
        spec = self.spec
        t, p = np.broadcast_arrays(np.atleast_1d(np.asarray(t, float)), np.atleast_1d(np.asarray(p, float)))
        if np.any(p <= 0):
            raise DomainError("nonpositive pressure")
        nodes, weights = gauss_legendre(spec.p0, p, self.gauss_nodes)   # (n, k)
        vhat, That = self._characteristics(t, np.concatenate([p[:, None], nodes], axis=1))
        kap, R = spec.consts.kappa, spec.consts.R
        phi = -R * np.sum(weights * nodes ** (kap - 1) * That[:, 1:], axis=1)
        return np.stack([vhat[:, 0, 0], vhat[:, 0, 1], spec.omega_hat(t, p), phi, That[:, 0]])

    # -- full field -----------------------------------------------------------
    def _full(self, pts, hat):
        spec = self.spec
        t, x, y, p = pts
        kap, cp = spec.consts.kappa, spec.consts.c_p
        g, s = spec.pair(spec.gamma, t), spec.pair(spec.sigma, t)
        gtt, stt = spec.pair(spec.gamma, t, 2), spec.pair(spec.sigma, t, 2)
        sp = np.stack([s[1], -s[0]])
        gp = np.stack([g[1], -g[0]])
        d = spec.delta(t)
        X = np.stack([x, y])
        Hm = spec.H(t)
        bx = np.sum(spec.b(t) * X, axis=0) / d
        pk = p**kap
        v = hat[:2] + np.einsum("ijn,jn->in", Hm, X)
        phi = (hat[3] + cp * pk * bx
               - np.sum(sp * X, axis=0) * np.sum(gtt * X, axis=0) / (2 * d)
               + np.sum(gp * X, axis=0) * np.sum(stt * X, axis=0) / (2 * d))
        T = pk * hat[4] - pk * bx
        return np.stack([v[0], v[1], hat[2], phi, T])

    def value(self, pts) -> np.ndarray:
        pts = as_points(pts)
        check_pressure(pts)
        return self._full(pts, self.hat(pts[0], pts[3]))

    def partials(self, pts, h: float = 3e-4, order: int = 4) -> np.ndarray:
        """x, y partials in closed form; t, p partials by central differences.

        The fourth-order stencil at ``h = 3e-4`` balances truncation against
        roundoff; the second-order one at ``1e-5`` leaves about 1e-10.
        """
        pts = as_points(pts)
        check_pressure(pts)
        spec = self.spec
        n = pts.shape[1]
        t, x, y, p = pts
        kap, cp = spec.consts.kappa, spec.consts.c_p
        weights = _FD_WEIGHTS[order]
        m = len(weights)
        ht = h * np.maximum(1.0, np.abs(t))
        hp = h * np.maximum(1.0, np.abs(p))
        if np.any(p - m * hp <= 0):
            raise DomainError("finite-difference stencil leaves p > 0")
        shifted = []
        for k, step in ((0, ht), (3, hp)):
            for j in range(1, m + 1):
                for sign in (1.0, -1.0):
                    q = pts.copy()
                    q[k] += sign * j * step
                    shifted.append(q)
        vals = self.value(np.concatenate(shifted, axis=1)).reshape(5, 2, m, 2, n)
        out = np.zeros((5, 4, n))
        for slot, k, step in ((0, 0, ht), (1, 3, hp)):
            acc = sum(w * (vals[:, slot, j, 0] - vals[:, slot, j, 1]) for j, w in enumerate(weights))
            out[:, k] = acc / step
        g, s = spec.pair(spec.gamma, t), spec.pair(spec.sigma, t)
        gtt, stt = spec.pair(spec.gamma, t, 2), spec.pair(spec.sigma, t, 2)
        sp = np.stack([s[1], -s[0]])
        gp = np.stack([g[1], -g[0]])
        d = spec.delta(t)
        X = np.stack([x, y])
        Hm = spec.H(t)
        bvec = spec.b(t) / d
        pk = p**kap
        out[0:2, 1:3] = Hm
        grad_phi = (cp * pk * bvec
                    - (sp * np.sum(gtt * X, axis=0) + gtt * np.sum(sp * X, axis=0)) / (2 * d)
                    + (gp * np.sum(stt * X, axis=0) + stt * np.sum(gp * X, axis=0)) / (2 * d))
        out[3, 1:3] = grad_phi
        out[4, 1:3] = -pk * bvec
        return out

    def field(self, h: float = 3e-4, order: int = 4) -> StateField:
        return StateField(self.value, lambda pts: self.partials(pts, h, order), h,
                          name=f"reduction(steps/unit={self.steps_per_unit})")

    # -- reduced system -------------------------------------------------------
    def reduced_residual(self, t, p, h: float = 1e-5) -> np.ndarray:
        """The four reduced equations (five rows: two momentum, hydrostatic,
        continuity, energy) at ``(t, p)`` with central differences in t and p."""
        spec = self.spec
        t = np.atleast_1d(np.asarray(t, float))
        p = np.atleast_1d(np.asarray(p, float))
        n = t.size
        ht = h * np.maximum(1.0, np.abs(t))
        hp = h * np.maximum(1.0, np.abs(p))
        tt = np.concatenate([t, t + ht, t - ht, t, t])
        pp = np.concatenate([p, p, p, p + hp, p - hp])
        vals = self.hat(tt, pp).reshape(5, 5, n)
        c, tp, tm, pp_, pm = (vals[:, k] for k in range(5))
        dt = (tp - tm) / (2 * ht)
        dp = (pp_ - pm) / (2 * hp)
        kap, cp, R = spec.consts.kappa, spec.consts.c_p, spec.consts.R
        d = spec.delta(t)
        Hm = spec.H(t)
        b = spec.b(t)
        w = c[2]
        mom = dt[:2] + w * dp[:2] + np.einsum("ijn,jn->in", Hm, c[:2]) + cp * p**kap * b / d
        hyd = dp[3] + R * p ** (kap - 1) * c[4]
        cont = spec.delta(t, 1) / d + dp[2]
        energy = dt[4] + w * dp[4] - np.sum(b * c[:2], axis=0) / d
        return np.stack([mom[0], mom[1], hyd, cont, energy])


def assemble_solution(spec: ReductionSpec, steps_per_unit: int = 200) -> StateField:
    """Full ``(u, v, omega, phi, T)`` field of the invariant solution."""
    return ReducedSolution(spec, steps_per_unit).field()


def rotating_family(spec: ReductionSpec, f: float, steps_per_unit: int = 200) -> StateField:
    """The invariant solution carried into a frame rotating with Coriolis parameter ``f``."""
    return pushforward_field(invert(derotation(f)), assemble_solution(spec, steps_per_unit))


@dataclass(frozen=True)
class ReductionReport:
    reduced_linf: float
    field: ResidualNorms
    convergence_errors: tuple
    convergence_ratio: float
    g_inverse_defect: float

    def as_dict(self):
        return {"reduced_linf": self.reduced_linf, "field": self.field.as_dict(),
                "convergence_errors": list(self.convergence_errors),
                "convergence_ratio": self.convergence_ratio,
                "g_inverse_defect": self.g_inverse_defect}


def reduced_grid(spec: ReductionSpec, n: int = 50) -> tuple[np.ndarray, np.ndarray]:
    t = np.linspace(*spec.box.t, n)
    p = np.linspace(*spec.box.p, n)
    tt, pp = np.meshgrid(t, p)
    return tt.ravel(), pp.ravel()


def convergence_study(spec: ReductionSpec, pts, coarse: int = 8, ratio: int = 4,
                      reference_factor: int = 16, floor: float = 1e-12) -> tuple[tuple, float]:
    """Field errors against a fine reference at ``coarse`` and ``coarse * ratio`` steps per unit.

    Returns the two errors and their ratio. When the coarse error is already
    at roundoff (time-independent integrands, where RK4 is exact) the ratio
    is reported as ``inf``.
    """
    ref = ReducedSolution(spec, coarse * ratio * reference_factor).value(pts)
    errs = []
    for steps in (coarse, coarse * ratio):
        errs.append(float(np.max(np.abs(ReducedSolution(spec, steps).value(pts) - ref))))
    if errs[0] <= floor * max(1.0, float(np.max(np.abs(ref)))):
        return tuple(errs), math.inf
    improvement = errs[0] / errs[1] if errs[1] > 0 else math.inf
    return tuple(errs), improvement


def verify_reduction(spec: ReductionSpec, pts, steps_per_unit: int = 200, grid: int = 50) -> ReductionReport:
    sol = ReducedSolution(spec, steps_per_unit)
    tg, pg = reduced_grid(spec, grid)
    reduced = float(np.max(np.abs(sol.reduced_residual(tg, pg))))
    norms = residual_norms(sol.field(), spec.consts, pts)
    errs, improvement = convergence_study(spec, pts[:, :200])
    gdef = solve_G(spec).inverse_defect()
    return ReductionReport(reduced, norms, errs, improvement, gdef)
