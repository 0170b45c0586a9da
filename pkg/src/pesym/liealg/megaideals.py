"""The selected megaideal chain, computed from derived algebras, centers,
centralizers and transporters, then compared with the
closed-form descriptions on low polynomial degrees."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import VerificationError
from .algebra import TruncatedAlgebra
from .subspace import Subspace, center, centralizer, derived, intersection, transporter


@dataclass(frozen=True)
class ChainEntry:
    label: str
    space: Subspace
    expected: Subspace
    degree_window: int
    note: str = ""

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def agrees(self) -> bool:
        d = self.degree_window
        return (self.space.restrict_degree(d) == self.expected.restrict_degree(d)
                and self.space.project_degree(d) == self.expected.project_degree(d))

    def low_degree(self, d: int) -> list[str]:
        return self.space.restrict_degree(d).describe()

    def as_dict(self) -> dict:
        out = {"label": self.label, "dim": self.dim, "agrees": self.agrees,
               "degree_window": self.degree_window, "generators": self.space.describe()}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class MegaidealChain:
    alg: TruncatedAlgebra
    entries: list
    intermediates: dict = field(default_factory=dict)
    z_series: list = field(default_factory=list)
    printed_last_matches: bool = False

    @property
    def all_agree(self) -> bool:
        return all(e.agrees for e in self.entries)

    def as_dict(self) -> dict:
        return {
            "N": self.alg.N, "M": self.alg.M, "kappa": str(self.alg.kappa), "ambient_dim": self.alg.dim,
            "entries": [e.as_dict() for e in self.entries],
            "intermediates": {k: {"dim": v.dim, "generators": v.describe()}
                              for k, v in self.intermediates.items()},
            "z_series_dims": [s.dim for s in self.z_series],
            "printed_last_entry_matches": self.printed_last_matches,
            "all_agree": self.all_agree,
        }


def _labels(alg: TruncatedAlgebra, scalars=(), x_degree: int = -1, z_degree: int = -1) -> list:
    out = list(scalars)
    for k in range(min(x_degree, alg.N) + 1):
        out += [alg.labels[6 + 2 * k], alg.labels[7 + 2 * k]]
    out += [alg.labels[6 + 2 * (alg.N + 1) + k] for k in range(min(z_degree, alg.M) + 1)]
    return out


def expected_spaces(alg: TruncatedAlgebra) -> list[tuple[str, Subspace]]:
    """Closed-form descriptions of the eleven entries, in chain order."""
    N, M, kap = alg.N, alg.M, alg.kappa
    span = lambda labs, extra=(): Subspace.span(alg, [alg.basis[alg.index(l)] for l in labs] + list(extra))
    e = alg.scalar
    return [
        ("<Z(1)>", span(_labels(alg, z_degree=0))),
        ("<Z(1),Z(t)>", span(_labels(alg, z_degree=1))),
        ("<S>", span(["S"])),
        ("<X(1,0),X(0,1),Z>", span(_labels(alg, x_degree=0, z_degree=M))),
        ("<X(deg<=1),Z>", span(_labels(alg, x_degree=1, z_degree=M))),
        ("<X(deg<=2),Z>", span(_labels(alg, x_degree=2, z_degree=M))),
        ("<J,X,Z>", span(_labels(alg, ["J"], N, M))),
        ("<P,X,Z>", span(_labels(alg, ["P"], N, M))),
        ("<D1+D2,J,P,X,Z>", span(_labels(alg, ["J", "P"], N, M), [e("D1") + e("D2")])),
        ("<D3,S>", span(["D3", "S"])),
        ("<kD1-2D3,P,S,X,Z>", span(_labels(alg, ["P", "S"], N, M),
                                   [e("D1").scale(kap) - e("D3").scale(2)])),
    ]


def printed_last_entry(alg: TruncatedAlgebra) -> Subspace:
    """The last entry exactly as printed, ``<D1,P,S,X,Z>``."""
    return Subspace.span(alg, [alg.basis[alg.index(l)]
                               for l in _labels(alg, ["D1", "P", "S"], alg.N, alg.M)])


def megaideal_chain(N: int = 4, kappa=Fraction(2, 7), strict: bool = True) -> MegaidealChain:
    """Compute the eleven entries; with ``strict`` a low-degree mismatch raises."""
    if N < 4:
        raise ValueError(f"the chain needs N >= 4 to keep boundary degrees clear, got {N}")
    alg = TruncatedAlgebra(N, kappa)
    g = Subspace.full(alg)
    g1 = derived(g)
    g2 = derived(g1)
    Zg2 = center(g2)
    Zg1 = center(g1)
    m1 = centralizer(g, g2)
    # the center of m1 is all of <Z(alpha)> even after truncation, unlike Z_{g''}
    g3 = center(m1)
    z1 = intersection(Zg1, g3)
    z_series = [z1]
    while True:
        nxt = transporter(g3, g1, z_series[-1])
        if nxt == z_series[-1]:
            break
        z_series.append(nxt)
    m1p = derived(m1)
    m2 = transporter(g, g, m1p)
    cg1m2 = centralizer(g1, m2)
    m3 = centralizer(g, m2)
    m4 = transporter(cg1m2, cg1m2, g3)
    x1 = transporter(cg1m2, cg1m2, m4)
    x2 = transporter(cg1m2, cg1m2, x1)
    last = transporter(g, m4 + m1p, g3)
    computed = [
        z1, z_series[1], m1p, m4, x1, x2,
        centralizer(g, m1), cg1m2, centralizer(m3, z1), m2, last,
    ]
    window = N - 2
    entries = []
    for (label, exp), space in zip(expected_spaces(alg), computed):
        note = ""
        if label.startswith("<kD1"):
            note = "printed form <D1,P,S,X,Z> is not what the recipe yields; see printed_last_entry_matches"
        entries.append(ChainEntry(label, space, exp, window, note))
    intermediates = {"g'": g1, "g''": g2, "Z_g''": Zg2, "g'''": g3, "Z_g'": Zg1, "m1": m1,
                     "m1'": m1p, "m2": m2, "m3": m3, "m4": m4, "C_g'(m2)": cg1m2,
                     "transporter(g,g,g'')": transporter(g, g, g2)}
    printed = printed_last_entry(alg)
    matches = (last.restrict_degree(window) == printed.restrict_degree(window))
    chain = MegaidealChain(alg, entries, intermediates, z_series, matches)
    if strict and not chain.all_agree:
        bad = [e.label for e in entries if not e.agrees]
        raise VerificationError(f"megaideal chain disagrees on degrees <= {window}: {bad}")
    return chain


def compare_truncations(a: MegaidealChain, b: MegaidealChain, degree: int = 2) -> list[bool]:
    """Entry-wise agreement of two chains on coordinates of degree <= ``degree``."""
    return [ea.low_degree(degree) == eb.low_degree(degree) for ea, eb in zip(a.entries, b.entries)]
