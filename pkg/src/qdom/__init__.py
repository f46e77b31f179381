"""Finite quantale-enriched domain theory relative to a class of ideals."""

from .caps import DEFAULT_CAPS, Caps
from .enriched import QCategory, QFunctor
from .ideals import ALL, FORMAL_BALLS, FSW, REPRESENTABLES, IdealFamily, flat, phi_generated
from .modules import Module
from .quantale import Quantale, ch_max, ch_plus, q2

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "Quantale",
    "q2",
    "ch_plus",
    "ch_max",
    "QCategory",
    "QFunctor",
    "Module",
    "IdealFamily",
    "REPRESENTABLES",
    "ALL",
    "FSW",
    "FORMAL_BALLS",
    "flat",
    "phi_generated",
]
