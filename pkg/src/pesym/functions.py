"""Smooth scalar functions of one variable with analytic derivatives.

Profiles (u0(p), T0(p), ...) and time-dependent parameters (beta(t),
gamma(t), alpha(t), ...) are all instances of :class:`Fn1D`. Every
function is vectorised over numpy arrays and returns the ``n``-th
derivative when called as ``fn(s, n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class Fn1D:
    def __call__(self, s, n: int = 0):
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    def __add__(self, other: "Fn1D") -> "Fn1D":
        return Sum((self, other))

    def __neg__(self) -> "Fn1D":
        return Scaled(-1.0, self)

    def __rmul__(self, c: float) -> "Fn1D":
        return Scaled(float(c), self)


@dataclass(frozen=True)
class Poly(Fn1D):
    """Polynomial with coefficients in increasing degree."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[float]):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs) or (0.0,))

    def __call__(self, s, n: int = 0):
        s = np.asarray(s, dtype=float)
        c = np.polynomial.polynomial.polyder(self.coeffs, n) if n else np.array(self.coeffs)
        if len(c) == 0:
            return np.zeros_like(s)
        return np.polynomial.polynomial.polyval(s, c) + np.zeros_like(s)

    def to_config(self):
        return {"poly": list(self.coeffs)}


def Const(value: float) -> Poly:
    return Poly([value])


@dataclass(frozen=True)
class Sine(Fn1D):
    """``amp * sin(freq * s + phase)``."""

    amp: float = 1.0
    freq: float = 1.0
    phase: float = 0.0

    def __call__(self, s, n: int = 0):
        s = np.asarray(s, dtype=float)
        return self.amp * self.freq**n * np.sin(self.freq * s + self.phase + n * np.pi / 2)

    def to_config(self):
        return {"sin": {"amp": self.amp, "freq": self.freq, "phase": self.phase}}


def Cosine(amp: float = 1.0, freq: float = 1.0, phase: float = 0.0) -> Sine:
    return Sine(amp, freq, phase + np.pi / 2)


@dataclass(frozen=True)
class Exp(Fn1D):
    """``amp * exp(rate * s)``."""

    amp: float = 1.0
    rate: float = 1.0

    def __call__(self, s, n: int = 0):
        s = np.asarray(s, dtype=float)
        return self.amp * self.rate**n * np.exp(self.rate * s)

    def to_config(self):
        return {"exp": {"amp": self.amp, "rate": self.rate}}


@dataclass(frozen=True)
class Sum(Fn1D):
    terms: tuple

    def __call__(self, s, n: int = 0):
        return sum(term(s, n) for term in self.terms)

    def to_config(self):
        return {"sum": [term.to_config() for term in self.terms]}


@dataclass(frozen=True)
class Scaled(Fn1D):
    c: float
    fn: Fn1D

    def __call__(self, s, n: int = 0):
        return self.c * self.fn(s, n)

    def to_config(self):
        return {"scale": self.c, "of": self.fn.to_config()}


def poly_from_fractions(coeffs: Sequence[Fraction]) -> Poly:
    return Poly([float(c) for c in coeffs])


def from_config(cfg) -> Fn1D:
    """Build a function from a JSON-compatible description.

    Accepted forms: a bare number (constant), ``{"const": c}``,
    ``{"poly": [c0, c1, ...]}``, ``{"sin": {...}}``, ``{"cos": {...}}``,
    ``{"exp": {...}}``, ``{"sum": [...]}`` and ``{"scale": c, "of": {...}}``.
    """
    if isinstance(cfg, (int, float)):
        return Const(float(cfg))
    if not isinstance(cfg, dict) or not cfg:
        raise ValueError(f"cannot build a function from {cfg!r}")
    if "scale" in cfg:
        return Scaled(float(cfg["scale"]), from_config(cfg["of"]))
    if len(cfg) != 1:
        raise ValueError(f"function config must have exactly one key, got {sorted(cfg)}")
    (kind, arg), = cfg.items()
    if kind == "const":
        return Const(float(arg))
    if kind == "poly":
        return Poly(arg)
    if kind in ("sin", "cos"):
        arg = dict(arg)
        unknown = set(arg) - {"amp", "freq", "phase"}
        if unknown:
            raise ValueError(f"unknown keys for {kind}: {sorted(unknown)}")
        return (Sine if kind == "sin" else Cosine)(**arg)
    if kind == "exp":
        return Exp(**arg)
    if kind == "sum":
        return Sum(tuple(from_config(c) for c in arg))
    raise ValueError(f"unknown function kind {kind!r}")


def pair_from_config(cfg) -> tuple[Fn1D, Fn1D]:
    if not isinstance(cfg, (list, tuple)) or len(cfg) != 2:
        raise ValueError(f"expected a pair of functions, got {cfg!r}")
    return from_config(cfg[0]), from_config(cfg[1])
