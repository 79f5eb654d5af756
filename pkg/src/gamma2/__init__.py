"""Finite presentations of the level-2 congruence subgroup of GL(n, Z)."""

from .exactmat import E, F, S, T, IntMatrix, Generator, generator_matrix, is_level2, parse_matrix
from .words import Word, evaluate, parse_word
from .presentations import Presentation, gamma2_presentation, gl2z_presentation
from .membership import NotInSubgroup, factor
from .schreier import derive_gamma2_2, schreier_table
from .complex import brown_assemble, build_B_mod2

__all__ = [
    "E", "F", "S", "T", "IntMatrix", "Generator", "generator_matrix", "is_level2", "parse_matrix",
    "Word", "evaluate", "parse_word", "Presentation", "gamma2_presentation", "gl2z_presentation",
    "NotInSubgroup", "factor", "derive_gamma2_2", "schreier_table", "brown_assemble", "build_B_mod2",
]
