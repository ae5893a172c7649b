"""Proper mergings of stars and chains, with the lattices and bijections around them."""

from .formulas import C, F_sc, galois_count
from .mergings import Merging, enumerate_proper_mergings, is_merging, is_proper
from .relations import Poset, Relation, make_antichain, make_chain, make_star

__all__ = [
    "C",
    "F_sc",
    "Merging",
    "Poset",
    "Relation",
    "enumerate_proper_mergings",
    "galois_count",
    "is_merging",
    "is_proper",
    "make_antichain",
    "make_chain",
    "make_star",
]
