"""Vector-field realizations of algebra elements and the numerical
isomorphism check between the rotating- and resting-frame algebras."""
from __future__ import annotations

import itertools
from typing import Optional

import numpy as np

from .. import generators as gen
from ..errors import DomainError
from ..fields import _FD_WEIGHTS, DEFAULT_BOX, PhysConsts, sample_points
from ..functions import Poly
from ..residual import VectorField
from .algebra import AlgVector, PolyFn, TruncatedAlgebra


def _poly(pf: PolyFn) -> Poly:
    return Poly([float(c) for c in pf.coeffs])


def _combine(terms) -> VectorField:
    terms = [(float(c), vf) for c, vf in terms if c]

    def coeffs(z):
        out = np.zeros_like(z)
        for c, vf in terms:
            out = out + c * vf(z)
        return out

    name = " + ".join(f"{c:g}*{vf.name}" for c, vf in terms) or "0"
    return VectorField(coeffs, name)


def realize(a: AlgVector, algebra: str = "g0", consts: PhysConsts = PhysConsts()) -> VectorField:
    """Vector field of ``a`` in the resting-frame (``g0``) or rotating-frame (``gf``) basis."""
    if algebra not in ("g0", "gf"):
        raise ValueError(f"algebra must be 'g0' or 'gf', got {algebra!r}")
    f = consts.f if algebra == "gf" else 0.0
    terms = [(a.d1, gen.D1(f)), (a.d2, gen.D2()), (a.d3, gen.D3()), (a.j, gen.J()),
             (a.p, gen.P()), (a.s, gen.S(consts))]
    if not (a.g1.is_zero() and a.g2.is_zero()):
        terms.append((1, gen.X((_poly(a.g1), _poly(a.g2)), f)))
    if not a.alpha.is_zero():
        terms.append((1, gen.Z(_poly(a.alpha))))
    return _combine(terms)


def redefined(a: AlgVector, consts: PhysConsts, corrupt: bool = False) -> VectorField:
    """Rotating-frame field matched to the resting-frame element ``a``.

    ``P -> P - (f/2) J`` and ``X(gamma) -> X(R(-f t/2) gamma)``; every other
    basis element is kept. Equivalently the rotating-frame ``X(gamma)`` is
    matched with the resting-frame ``X(R(f t/2) gamma)``. ``corrupt`` drops the
    ``-(f/2) J`` correction (negative control).
    """
    f = consts.f
    fh = 0.5 * f
    j = float(a.j) - (0.0 if corrupt else fh * float(a.p))
    terms = [(a.d1, gen.D1(f)), (a.d2, gen.D2()), (a.d3, gen.D3()), (j, gen.J()),
             (a.p, gen.P()), (a.s, gen.S(consts))]
    if not (a.g1.is_zero() and a.g2.is_zero()):
        pair = gen.rotated_pair((_poly(a.g1), _poly(a.g2)), -f)
        terms.append((1, gen.X(pair, f)))
    if not a.alpha.is_zero():
        terms.append((1, gen.Z(_poly(a.alpha))))
    return _combine(terms)


def _gradient(vf: VectorField, z: np.ndarray, h: float, order: int = 6) -> np.ndarray:
    """``d vf^i / d z_k`` by central differences; shape ``(9, 9, n)``."""
    weights = _FD_WEIGHTS[order]
    out = np.zeros((9, 9, z.shape[1]))
    for k in range(9):
        step = h * np.maximum(1.0, np.abs(z[k]))
        if k == 3 and np.any(z[3] - len(weights) * step <= 0):
            raise DomainError("finite-difference stencil leaves p > 0")
        for m, w in enumerate(weights, start=1):
            hi, lo = z.copy(), z.copy()
            hi[k] += m * step
            lo[k] -= m * step
            out[:, k] += w * (vf(hi) - vf(lo))
        out[:, k] /= step
    return out


def vf_bracket_at(Q1: VectorField, Q2: VectorField, z, h: float = 1e-3) -> np.ndarray:
    """Commutator ``(Q1 . grad) Q2 - (Q2 . grad) Q1`` at the points ``z``; shape ``(9, n)``.

    Gradients use a sixth-order central stencil with step ``h * max(1, |z_k|)``.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    if np.any(z[3] <= 0):
        raise DomainError("vector-field bracket needs p > 0")
    q1, q2 = Q1(z), Q2(z)
    return (np.einsum("kn,ikn->in", q1, _gradient(Q2, z, h))
            - np.einsum("kn,ikn->in", q2, _gradient(Q1, z, h)))


def sample_states(seed: int, n: int, box=DEFAULT_BOX) -> np.ndarray:
    """Random 9-points: box-sampled (t,x,y,p) and dependent values in [-1, 1]."""
    pts = sample_points(seed, n, box)
    rng = np.random.default_rng(seed + 1)
    return np.vstack([pts, rng.uniform(-1.0, 1.0, (5, n))])


def isomorphism_check(f: float, n_points: int = 100, seed: int = 0, N: int = 3,
                      corrupt: bool = False, consts: Optional[PhysConsts] = None) -> float:
    """Worst discrepancy between rotating-frame commutators of the redefined
    basis and the resting-frame structure constants, over all basis pairs."""
    consts = (consts or PhysConsts()).with_f(f)
    alg = TruncatedAlgebra(N, consts.kappa_exact)
    z = sample_states(seed, n_points)
    fields = [redefined(b, consts, corrupt) for b in alg.basis]
    values = [q(z) for q in fields]
    grads = [_gradient(q, z, 1e-3) for q in fields]
    worst = 0.0
    for i, j in itertools.combinations(range(alg.dim), 2):
        lhs = (np.einsum("kn,ikn->in", values[i], grads[j])
               - np.einsum("kn,ikn->in", values[j], grads[i]))
        rhs = redefined(alg.bracket(alg.basis[i], alg.basis[j]), consts, corrupt)(z)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
