"""Row reduction over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with leftmost pivots; zero rows dropped."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][c]
        if lead != 1:
            mat[r] = [x / lead for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                k = mat[i][c]
                mat[i] = [a - k * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` for ``A`` given by ``rows``."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(x)
    return basis


def reduce_mod(vec: Sequence[Fraction], red: Sequence[Sequence[Fraction]], pivots: Sequence[int]) -> list[Fraction]:
    """Remainder of ``vec`` after eliminating the pivot columns of an RREF basis."""
    out = list(vec)
    for row, pc in zip(red, pivots):
        k = out[pc]
        if k != 0:
            out = [a - k * b for a, b in zip(out, row)]
    return out
