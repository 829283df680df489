"""Adjoint elementary Chevalley groups over commutative rings, with exact arithmetic."""

from .chevalley import ChevalleyAlgebra, ad_matrix, algebra, bracket, killing_form
from .group import GroupElement, c_sign, check_relations, h_elem, w_elem, x_elem
from .linalg import Matrix
from .rings import Ring, RingElement, in_radical, invert, parse_ring, residue
from .roots import Root, RootSystem, build, find_weyl_word, pairing, reflect

__version__ = "0.1.0"

__all__ = [
    "ChevalleyAlgebra", "GroupElement", "Matrix", "Ring", "RingElement", "Root", "RootSystem", "ad_matrix",
    "algebra", "bracket", "build", "c_sign", "check_relations", "find_weyl_word", "h_elem", "in_radical",
    "invert", "killing_form", "pairing", "parse_ring", "reflect", "residue", "w_elem", "x_elem",
]
