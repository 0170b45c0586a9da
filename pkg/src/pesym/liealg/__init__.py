"""Exact truncated Lie algebra, subspace operations and megaideals."""
from .algebra import AlgVector, PolyFn, TruncatedAlgebra, antisymmetry_defect, jacobi_check
from .megaideals import ChainEntry, MegaidealChain, compare_truncations, megaideal_chain
from .realize import isomorphism_check, realize, redefined, sample_states, vf_bracket_at
from .subspace import (Subspace, center, centralizer, derived, intersection, is_abelian,
                       is_ideal, transporter)

__all__ = [
    "AlgVector", "PolyFn", "TruncatedAlgebra", "antisymmetry_defect", "jacobi_check",
    "ChainEntry", "MegaidealChain", "compare_truncations", "megaideal_chain",
    "isomorphism_check", "realize", "redefined", "sample_states", "vf_bracket_at",
    "Subspace", "center", "centralizer", "derived", "intersection", "is_abelian", "is_ideal", "transporter",
]
