"""Exact Kazhdan-Lusztig combinatorics for symmetric groups."""

from cellkit.coxeter import CoxeterContext, Element, from_word, parse_word
from cellkit.hecke import HeckeElt, KLTable, kl_table, load_table, save_table
from cellkit.laurent import LaurentPoly

__version__ = "0.1.0"

__all__ = [
    "CoxeterContext",
    "Element",
    "HeckeElt",
    "KLTable",
    "LaurentPoly",
    "from_word",
    "kl_table",
    "load_table",
    "parse_word",
    "save_table",
]
