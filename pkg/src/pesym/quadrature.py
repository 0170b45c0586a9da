"""Quadrature and fixed-step integration kernels."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np


def adaptive_simpson(fn: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-12, max_depth: int = 50) -> float:
    """Recursive adaptive Simpson rule with Richardson correction."""
    if a == b:
        return 0.0

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = fn(lm), fn(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2, depth - 1))

    fa, fb, fm = fn(a), fn(b), fn(0.5 * (a + b))
    # absolute tolerance scaled by the magnitude of the integral's first estimate
    whole = simpson(fa, fm, fb, a, b)
    scale = max(1.0, abs(whole))
    return recurse(a, b, fa, fm, fb, whole, tol * scale, max_depth)


def composite_simpson(fn: Callable[[np.ndarray], np.ndarray], a, b, panels: int) -> np.ndarray:
    """Composite Simpson over [a, b] for arrays of endpoints.

    ``fn`` receives node arrays of shape ``(panels + 1, *shape)``; the
    integral is returned with the broadcast shape of ``a`` and ``b``.
    """
    if panels % 2:
        panels += 1
    a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
    k = np.arange(panels + 1).reshape((-1,) + (1,) * a.ndim)
    h = (b - a) / panels
    nodes = a + k * h
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    vals = fn(nodes)
    return h / 3.0 * np.tensordot(w, vals, axes=(0, 0))


def simpson_doubling(fn, a, b, tol: float = 1e-12, start: int = 16, max_panels: int = 1 << 16):
    """Composite Simpson, doubling panels until successive estimates agree to ``tol``."""
    panels = start
    prev = composite_simpson(fn, a, b, panels)
    while True:
        panels *= 2
        cur = composite_simpson(fn, a, b, panels)
        if np.max(np.abs(cur - prev), initial=0.0) < tol or panels >= max_panels:
            return cur
        prev = cur


def gauss_legendre(a, b, n: int):
    """Nodes and weights of the ``n``-point Gauss rule mapped onto [a, b].

    Endpoints may be arrays; nodes/weights get a trailing axis of length ``n``.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    a = np.asarray(a, float)[..., None]
    b = np.asarray(b, float)[..., None]
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def rk4(rhs, y0, t0, t1, steps: int):
    """Classical fourth-order Runge-Kutta from ``t0`` to ``t1``.

    ``y0`` may be any pytree-free container supported by ``rhs``: here a
    tuple of numpy arrays. ``t0``/``t1`` may be arrays (one step size per
    batch member); ``rhs(t, y)`` must broadcast accordingly.
    """
    t0 = np.asarray(t0, float)
    h = (np.asarray(t1, float) - t0) / steps

    def axpy(y, k, c):
        return tuple(yi + _bcast(c * h, yi) * ki for yi, ki in zip(y, k))

    y = tuple(y0)
    t = t0
    for i in range(steps):
        t = t0 + i * h
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, axpy(y, k1, 0.5))
        k3 = rhs(t + 0.5 * h, axpy(y, k2, 0.5))
        k4 = rhs(t + h, axpy(y, k3, 1.0))
        y = tuple(
            yi + _bcast(h / 6.0, yi) * (a + 2.0 * b + 2.0 * c + d)
            for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
        )
    return y


def _bcast(coef, target):
    coef = np.asarray(coef, float)
    return coef.reshape(coef.shape + (1,) * (np.ndim(target) - coef.ndim))


def steps_for(span: float, per_unit: int, minimum: int = 4) -> int:
    return max(minimum, int(math.ceil(abs(span) * per_unit)))
