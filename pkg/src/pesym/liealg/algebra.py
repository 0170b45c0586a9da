"""Polynomially truncated model of the resting-frame invariance algebra.

Elements are ``d1 D1 + d2 D2 + d3 D3 + j J + p P + s S + X(gamma) + Z(alpha)``
with ``gamma`` a pair of polynomials of degree <= N and ``alpha`` of degree
<= M = max(N, 2N - 2), all with rational coefficients. The coordinate order
is D1, D2, D3, J, P, S, then X by degree and component, then Z by degree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

SCALARS = ("D1", "D2", "D3", "J", "P", "S")
ZERO = Fraction(0)


@dataclass(frozen=True)
class PolyFn:
    """Exact polynomial ``sum c_k t^k`` with a degree cap."""

    coeffs: tuple
    cap: int

    def __post_init__(self):
        if len(self.coeffs) != self.cap + 1:
            raise ValueError(f"PolyFn needs {self.cap + 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, cap: int) -> "PolyFn":
        return cls((ZERO,) * (cap + 1), cap)

    @classmethod
    def of(cls, coeffs: Sequence, cap: int) -> "PolyFn":
        c = [Fraction(x) for x in coeffs]
        if any(x != 0 for x in c[cap + 1:]):
            raise OverflowError(f"polynomial of degree {len(c) - 1} exceeds cap {cap}")
        c = (c + [ZERO] * (cap + 1))[:cap + 1]
        return cls(tuple(c), cap)

    def __add__(self, other: "PolyFn") -> "PolyFn":
        return PolyFn(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.cap)

    def __sub__(self, other: "PolyFn") -> "PolyFn":
        return PolyFn(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.cap)

    def scale(self, c) -> "PolyFn":
        c = Fraction(c)
        return PolyFn(tuple(c * a for a in self.coeffs), self.cap)

    def deriv(self) -> "PolyFn":
        return PolyFn(tuple(k * a for k, a in enumerate(self.coeffs))[1:] + (ZERO,), self.cap)

    def t_deriv(self) -> "PolyFn":
        """``t * d/dt``, which keeps the degree."""
        return PolyFn(tuple(k * a for k, a in enumerate(self.coeffs)), self.cap)

    def mul(self, other: "PolyFn", cap: int) -> "PolyFn":
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return PolyFn.of(out, cap)

    def recap(self, cap: int) -> "PolyFn":
        return PolyFn.of(self.coeffs, cap)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def degree(self) -> int:
        nz = [k for k, a in enumerate(self.coeffs) if a]
        return nz[-1] if nz else -1

    def __call__(self, t: float, n: int = 0) -> float:
        p = self
        for _ in range(n):
            p = p.deriv()
        return sum(float(a) * t**k for k, a in enumerate(p.coeffs))


@dataclass(frozen=True)
class AlgVector:
    d1: Fraction
    d2: Fraction
    d3: Fraction
    j: Fraction
    p: Fraction
    s: Fraction
    g1: PolyFn
    g2: PolyFn
    alpha: PolyFn

    def scalars(self) -> tuple:
        return (self.d1, self.d2, self.d3, self.j, self.p, self.s)

    def __add__(self, o: "AlgVector") -> "AlgVector":
        a = [x + y for x, y in zip(self.scalars(), o.scalars())]
        return AlgVector(*a, self.g1 + o.g1, self.g2 + o.g2, self.alpha + o.alpha)

    def __sub__(self, o: "AlgVector") -> "AlgVector":
        return self + o.scale(-1)

    def scale(self, c) -> "AlgVector":
        c = Fraction(c)
        return AlgVector(*(c * x for x in self.scalars()), self.g1.scale(c), self.g2.scale(c),
                         self.alpha.scale(c))

    def is_zero(self) -> bool:
        return not any(self.scalars()) and self.g1.is_zero() and self.g2.is_zero() and self.alpha.is_zero()


class TruncatedAlgebra:
    """Exact structure of the truncated algebra for a given ``N`` and rational ``kappa``."""

    def __init__(self, N: int = 4, kappa=Fraction(2, 7)):
        if N < 2:
            raise ValueError(f"truncation degree N must be >= 2, got {N}")
        self.N = N
        self.M = max(N, 2 * N - 2)
        self.kappa = Fraction(kappa)
        self.dim = 6 + 2 * (N + 1) + (self.M + 1)

    def __repr__(self):
        return f"TruncatedAlgebra(N={self.N}, M={self.M}, kappa={self.kappa})"

    # -- construction -------------------------------------------------------
    def element(self, d1=0, d2=0, d3=0, j=0, p=0, s=0, gamma=((), ()), alpha=()) -> AlgVector:
        return AlgVector(*(Fraction(x) for x in (d1, d2, d3, j, p, s)),
                         PolyFn.of(gamma[0], self.N), PolyFn.of(gamma[1], self.N),
                         PolyFn.of(alpha, self.M))

    def zero(self) -> AlgVector:
        return self.element()

    def X(self, g1: Sequence = (), g2: Sequence = ()) -> AlgVector:
        return self.element(gamma=(g1, g2))

    def Z(self, alpha: Sequence) -> AlgVector:
        return self.element(alpha=alpha)

    def scalar(self, name: str) -> AlgVector:
        kw = {k.lower(): 0 for k in SCALARS}
        kw[name.lower()] = 1
        return self.element(**kw)

    # -- coordinates --------------------------------------------------------
    def coords(self, a: AlgVector) -> tuple:
        xs = []
        for k in range(self.N + 1):
            xs += [a.g1.coeffs[k], a.g2.coeffs[k]]
        return tuple(a.scalars()) + tuple(xs) + tuple(a.alpha.coeffs)

    def vector(self, c: Sequence) -> AlgVector:
        c = [Fraction(x) for x in c]
        if len(c) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(c)}")
        n = self.N
        xs = c[6:6 + 2 * (n + 1)]
        return AlgVector(*c[:6], PolyFn(tuple(xs[0::2]), n), PolyFn(tuple(xs[1::2]), n),
                         PolyFn(tuple(c[6 + 2 * (n + 1):]), self.M))

    @cached_property
    def labels(self) -> tuple:
        out = list(SCALARS)
        for k in range(self.N + 1):
            mono = "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
            out += [f"X({mono},0)", f"X(0,{mono})"]
        out += [f"Z({'1' if k == 0 else ('t' if k == 1 else f't^{k}')})" for k in range(self.M + 1)]
        return tuple(out)

    def degree_of(self, index: int) -> int:
        """Polynomial degree of a coordinate (scalars count as degree 0)."""
        if index < 6:
            return 0
        if index < 6 + 2 * (self.N + 1):
            return (index - 6) // 2
        return index - 6 - 2 * (self.N + 1)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def basis(self) -> tuple:
        eye = [[ZERO] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            eye[i][i] = Fraction(1)
        return tuple(self.vector(r) for r in eye)

    def describe(self, a: AlgVector) -> str:
        terms = []
        for c, lab in zip(self.coords(a), self.labels):
            if c:
                terms.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(terms) if terms else "0"

    # -- bracket ------------------------------------------------------------
    def _L(self, a: AlgVector, g1: PolyFn, g2: PolyFn) -> tuple:
        """X-part of ``[a, X(gamma)]`` from the scalar part of ``a``."""
        def comp(g, rot):
            return (g.t_deriv().scale(a.d1) - g.scale(a.d2) + g.deriv().scale(a.p) + rot.scale(a.j))
        return comp(g1, g2), comp(g2, g1.scale(-1))

    def _M(self, a: AlgVector, al: PolyFn) -> PolyFn:
        """Z-part of ``[a, Z(alpha)]`` from the scalar part of ``a``."""
        return ((al.scale(2) + al.t_deriv()).scale(a.d1) - al.scale(2 * a.d2) + al.deriv().scale(a.p))

    def bracket(self, a: AlgVector, b: AlgVector) -> AlgVector:
        kap = self.kappa
        p = -(a.d1 * b.p - a.p * b.d1)
        s = ((2 * a.d1 - 2 * a.d2 + kap * a.d3) * b.s - (2 * b.d1 - 2 * b.d2 + kap * b.d3) * a.s)
        la1, la2 = self._L(a, b.g1, b.g2)
        lb1, lb2 = self._L(b, a.g1, a.g2)
        g1, g2 = la1 - lb1, la2 - lb2
        # [X(gamma), X(sigma)] = Z(sigma . gamma_tt - gamma . sigma_tt)
        M = self.M
        xx = (b.g1.mul(a.g1.deriv().deriv(), M) + b.g2.mul(a.g2.deriv().deriv(), M)
              - a.g1.mul(b.g1.deriv().deriv(), M) - a.g2.mul(b.g2.deriv().deriv(), M))
        alpha = self._M(a, b.alpha) - self._M(b, a.alpha) + xx
        return AlgVector(ZERO, ZERO, ZERO, ZERO, p, s, g1, g2, alpha)

    @cached_property
    def table(self) -> dict:
        """Sparse structure constants ``{(i, j): {k: c}}`` over all ordered basis pairs."""
        return structure_table(self.basis, self.bracket, self.coords)

    def bracket_coords(self, x: Sequence, y: Sequence) -> list:
        """Bracket of coordinate vectors through the structure constants."""
        out = [ZERO] * self.dim
        ys = [(j, b) for j, b in enumerate(y) if b]
        table = self.table
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in ys:
                entry = table.get((i, j))
                if entry:
                    ab = a * b
                    for k, c in entry.items():
                        out[k] += ab * c
        return out


def structure_table(basis: Sequence[AlgVector], bracket: Callable, coords: Callable) -> dict:
    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            nz = {k: v for k, v in enumerate(coords(bracket(a, b))) if v}
            if nz:
                table[(i, j)] = nz
    return table


def antisymmetry_defect(alg: TruncatedAlgebra, bracket: Callable | None = None) -> Fraction:
    """max |[a,b] + [b,a]| over basis pairs (including a = b)."""
    br = bracket or alg.bracket
    worst = ZERO
    for a, b in itertools.combinations_with_replacement(alg.basis, 2):
        s = alg.coords(br(a, b) + br(b, a))
        worst = max([worst] + [abs(x) for x in s])
    return worst


def jacobi_check(alg: TruncatedAlgebra, basis: Sequence[AlgVector] | None = None,
                 bracket: Callable | None = None) -> Fraction:
    """max ||[[a,b],c] + [[b,c],a] + [[c,a],b]|| over all ordered basis triples.

    The bracket is evaluated once per basis pair; nested brackets use its
    bilinear extension through the resulting structure constants.
    """
    basis = alg.basis if basis is None else basis
    br = bracket or alg.bracket
    n = len(basis)
    # express each [e_i, e_j] in the given basis
    span = [alg.coords(e) for e in basis]
    table = {}
    for (i, j), entry in structure_table(basis, br, alg.coords).items():
        table[(i, j)] = _in_basis(span, entry, alg.dim)

    def nested(i, j, k):
        out = {}
        for l, c in table.get((i, j), {}).items():
            for m, d in table.get((l, k), {}).items():
                out[m] = out.get(m, ZERO) + c * d
        return out

    worst = ZERO
    for i, j, k in itertools.product(range(n), repeat=3):
        total = {}
        for part in (nested(i, j, k), nested(j, k, i), nested(k, i, j)):
            for m, c in part.items():
                total[m] = total.get(m, ZERO) + c
        worst = max([worst] + [abs(c) for c in total.values()])
    return worst


def _in_basis(span, entry: dict, dim: int) -> dict:
    """Coefficients of a coordinate vector in the basis ``span`` (unit vectors fast path)."""
    vec = [ZERO] * dim
    for k, c in entry.items():
        vec[k] = c
    units = all(sum(1 for x in row if x) == 1 for row in span)
    if units:
        out = {}
        for idx, row in enumerate(span):
            k = next(i for i, x in enumerate(row) if x)
            if vec[k]:
                out[idx] = vec[k] / row[k]
                vec[k] = ZERO
        if any(vec):
            raise ArithmeticError("bracket leaves the span of the supplied basis")
        return out
    from .exact import rref
    cols = len(span)
    aug = [[row[k] for row in span] + [vec[k]] for k in range(dim)]
    red, piv = rref(aug, cols + 1)
    if cols in piv:
        raise ArithmeticError("bracket leaves the span of the supplied basis")
    return {p: r[cols] for r, p in zip(red, piv) if r[cols]}
