from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pesym.errors import VerificationError
from pesym.liealg import (Subspace, TruncatedAlgebra, center, centralizer, compare_truncations, derived,
                          intersection, is_abelian, is_ideal, megaideal_chain, transporter)
from pesym.liealg.megaideals import expected_spaces, printed_last_entry


@pytest.fixture(scope="module")
def chain4():
    return megaideal_chain(4)


@pytest.fixture(scope="module")
def alg3():
    return TruncatedAlgebra(3)


def test_subspace_basics(alg3):
    a = Subspace.of_labels(alg3, ["D1", "P", "Z(1)"])
    b = Subspace.of_labels(alg3, ["P", "S"])
    assert (a + b).dim == 4
    assert intersection(a, b) == Subspace.of_labels(alg3, ["P"])
    assert a.contains(alg3.scalar("D1").scale(3) + alg3.Z([5]))
    assert not a.contains(alg3.scalar("S"))
    assert (a + b).contains_space(a)
    assert Subspace.span(alg3, [alg3.scalar("P"), alg3.scalar("P").scale(2)]).dim == 1


def test_degree_window(alg3):
    s = Subspace.span(alg3, [alg3.X([0, 0, 0, 1]) + alg3.Z([1]), alg3.Z([0, 0, 0, 1])])
    assert s.restrict_degree(2).dim == 0
    assert s.project_degree(2) == Subspace.of_labels(alg3, ["Z(1)"])


def test_transporter_definition(alg3):
    g = Subspace.full(alg3)
    res = transporter(g, Subspace.of_labels(alg3, ["S"]), Subspace.zero(alg3))
    # everything commuting with S: kernel of 2 d1 - 2 d2 + kappa d3 on the scalars, S itself, J, P, X, Z
    assert res.dim == alg3.dim - 1
    assert not res.contains(alg3.scalar("D1"))
    assert res.contains(alg3.scalar("D1") + alg3.scalar("D2"))
    assert res.contains(alg3.scalar("D1").scale(alg3.kappa) - alg3.scalar("D3").scale(2))


def test_centralizer_and_center(alg3):
    g = Subspace.full(alg3)
    zs = Subspace.of_labels(alg3, [l for l in alg3.labels if l.startswith("Z(")])
    assert is_abelian(zs)
    assert center(zs) == zs
    assert centralizer(g, zs).contains_space(zs)
    assert not centralizer(g, zs).contains(alg3.scalar("D1"))
    assert derived(Subspace.of_labels(alg3, ["D1", "P"])) == Subspace.of_labels(alg3, ["P"])


@given(st.lists(st.integers(0, 20), min_size=1, max_size=5), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_span_contains_combinations(idx, coeffs):
    alg = TruncatedAlgebra(2)
    vecs = [alg.basis[i % alg.dim] for i in idx]
    sub = Subspace.span(alg, vecs)
    combo = alg.zero()
    for c, v in zip(coeffs, vecs):
        combo = combo + v.scale(c)
    assert sub.contains(combo)


def test_chain_entries_reproduced(chain4):
    assert len(chain4.entries) == 11
    assert chain4.all_agree
    assert [e.dim for e in chain4.entries][:3] == [1, 2, 1]


def test_z_series(chain4):
    alg = chain4.alg
    z = [l for l in alg.labels if l.startswith("Z(")]
    assert [s.dim for s in chain4.z_series] == list(range(1, alg.M + 2))
    for k, s in enumerate(chain4.z_series):
        assert s == Subspace.of_labels(alg, z[:k + 1])


def test_last_entry_is_not_the_printed_form(chain4):
    last = chain4.entries[-1]
    assert last.label == "<kD1-2D3,P,S,X,Z>"
    assert not chain4.printed_last_matches
    alg = chain4.alg
    assert not last.space.contains(alg.scalar("D1"))
    assert last.space.contains(alg.scalar("D1").scale(alg.kappa) - alg.scalar("D3").scale(2))
    assert printed_last_entry(alg) != last.space


def test_every_entry_is_an_ideal(chain4):
    alg = chain4.alg
    rng = np.random.default_rng(9)
    for e in chain4.entries:
        rows = e.space.rows
        for _ in range(50):
            c = rng.integers(-3, 4, len(rows))
            x = [sum(Fraction(int(ci)) * r[k] for ci, r in zip(c, rows)) for k in range(alg.dim)]
            y = [Fraction(int(v)) for v in rng.integers(-3, 4, alg.dim)]
            assert e.space.contains(alg.bracket_coords(x, y)), e.label
        assert is_ideal(e.space)


def test_truncation_stability(chain4):
    chain6 = megaideal_chain(6)
    assert all(compare_truncations(chain4, chain6, degree=2))
    # low-degree dimensions match too
    assert [e.space.restrict_degree(2).dim for e in chain4.entries] == \
        [e.space.restrict_degree(2).dim for e in chain6.entries]


def test_chain_needs_room():
    with pytest.raises(ValueError):
        megaideal_chain(3)


def test_strict_mode_raises_on_mismatch(monkeypatch):
    import pesym.liealg.megaideals as mod
    original = mod.expected_spaces

    def shuffled(alg):
        out = original(alg)
        out[2], out[9] = out[9], out[2]
        return out

    monkeypatch.setattr(mod, "expected_spaces", shuffled)
    with pytest.raises(VerificationError):
        mod.megaideal_chain(4)
    assert not mod.megaideal_chain(4, strict=False).all_agree


def test_report_dict(chain4):
    d = chain4.as_dict()
    assert d["N"] == 4 and len(d["entries"]) == 11
    assert d["printed_last_entry_matches"] is False
    assert "note" in d["entries"][-1]


def test_expected_labels_in_order():
    labels = [lab for lab, _ in expected_spaces(TruncatedAlgebra(4))]
    assert labels[0] == "<Z(1)>" and labels[-1] == "<kD1-2D3,P,S,X,Z>" and len(labels) == 11
