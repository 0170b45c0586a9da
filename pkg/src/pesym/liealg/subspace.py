"""Subspaces of the truncated algebra and the exact operations on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import AlgVector, TruncatedAlgebra
from .exact import nullspace, reduce_mod, rref


@dataclass(frozen=True)
class Subspace:
    """Span of rows kept in canonical reduced echelon form."""

    alg: TruncatedAlgebra
    rows: tuple
    pivots: tuple

    @classmethod
    def span(cls, alg: TruncatedAlgebra, vectors: Iterable) -> "Subspace":
        rows = [alg.coords(v) if isinstance(v, AlgVector) else tuple(v) for v in vectors]
        red, piv = rref(rows, alg.dim) if rows else ([], [])
        return cls(alg, tuple(tuple(r) for r in red), tuple(piv))

    @classmethod
    def full(cls, alg: TruncatedAlgebra) -> "Subspace":
        return cls.span(alg, alg.basis)

    @classmethod
    def zero(cls, alg: TruncatedAlgebra) -> "Subspace":
        return cls(alg, (), ())

    @classmethod
    def of_labels(cls, alg: TruncatedAlgebra, labels: Iterable[str]) -> "Subspace":
        return cls.span(alg, [alg.basis[alg.index(l)] for l in labels])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def vectors(self) -> tuple:
        return tuple(self.alg.vector(r) for r in self.rows)

    def remainder(self, v) -> list:
        c = list(self.alg.coords(v)) if isinstance(v, AlgVector) else list(v)
        return reduce_mod(c, self.rows, self.pivots)

    def contains(self, v) -> bool:
        return not any(self.remainder(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.alg, list(self.rows) + list(other.rows))

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def describe(self) -> list[str]:
        return [self.alg.describe(v) for v in self.vectors]

    def restrict_degree(self, d: int) -> "Subspace":
        """Intersection with the coordinate window of polynomial degree <= d."""
        alg = self.alg
        window = [i for i in range(alg.dim) if alg.degree_of(i) <= d]
        return intersection(self, Subspace.span(alg, [alg.basis[i] for i in window]))

    def project_degree(self, d: int) -> "Subspace":
        """Image under the coordinate projection onto degree <= d."""
        alg = self.alg
        keep = [alg.degree_of(i) <= d for i in range(alg.dim)]
        return Subspace.span(alg, [[c if k else Fraction(0) for c, k in zip(r, keep)] for r in self.rows])


def _solve_in(i0: Subspace, conditions) -> Subspace:
    """Elements ``x = sum c_k e_k`` of ``i0`` with every linear condition on ``c`` zero.

    ``conditions(e)`` returns, for a basis vector ``e`` of ``i0``, the flat list
    of values whose combination must vanish.
    """
    cols = [conditions(e) for e in i0.rows]
    if not cols:
        return Subspace.zero(i0.alg)
    nrows = len(cols[0])
    rows = [[col[r] for col in cols] for r in range(nrows)]
    rows = [r for r in rows if any(r)]
    kernel = nullspace(rows, len(cols))
    dim = i0.alg.dim
    out = []
    for c in kernel:
        acc = [Fraction(0)] * dim
        for ck, e in zip(c, i0.rows):
            if ck:
                acc = [a + ck * x for a, x in zip(acc, e)]
        out.append(acc)
    return Subspace.span(i0.alg, out)


def transporter(i0: Subspace, i1: Subspace, i2: Subspace) -> Subspace:
    """``{x in i0 : [x, b] in i2 for all b in i1}``, re-verified exactly."""
    alg = i0.alg
    others = i1.rows

    def conditions(e):
        flat = []
        for b in others:
            flat += i2.remainder(alg.bracket_coords(e, b))
        return flat

    result = _solve_in(i0, conditions)
    for x in result.rows:
        assert i0.contains(x)
        for b in others:
            assert i2.contains(alg.bracket_coords(x, b))
    return result


def centralizer(ambient: Subspace, b: Subspace) -> Subspace:
    return transporter(ambient, b, Subspace.zero(ambient.alg))


def center(sub: Subspace) -> Subspace:
    return centralizer(sub, sub)


def derived(sub: Subspace) -> Subspace:
    vs = sub.rows
    alg = sub.alg
    return Subspace.span(alg, [alg.bracket_coords(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]])


def intersection(a: Subspace, b: Subspace) -> Subspace:
    return _solve_in(a, lambda e: b.remainder(e))


def is_ideal(sub: Subspace, ambient: Subspace | None = None) -> bool:
    ambient = Subspace.full(sub.alg) if ambient is None else ambient
    return all(sub.contains(sub.alg.bracket_coords(x, y)) for x in sub.rows for y in ambient.rows)


def is_abelian(sub: Subspace) -> bool:
    return derived(sub).dim == 0


def span_labels(alg: TruncatedAlgebra, labels: Sequence[str]) -> Subspace:
    return Subspace.of_labels(alg, labels)
