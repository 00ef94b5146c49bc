"""Executable models of product systems over quasi-lattice ordered monoids.

Submodules
----------
monoid           join algebra on N^k and free products of N
product_system   lexicographic fibres, multiplication and multiplier twists
fock             truncated Fock space and the left regular representation
reps             generator assignments and relation emission
crossed_product  monomial algebra and diagonal expectations
"""

from .monoid import INFINITY, FreeAbelian, FreeProduct, is_infinite
from .product_system import Bicharacter, FibreVector, ProductSystem, inner_product
from .fock import Truncation, build_truncation, FockOperator
from .report import CheckRecord, Report

__all__ = [
    "INFINITY",
    "FreeAbelian",
    "FreeProduct",
    "is_infinite",
    "Bicharacter",
    "FibreVector",
    "ProductSystem",
    "inner_product",
    "Truncation",
    "build_truncation",
    "FockOperator",
    "CheckRecord",
    "Report",
]

__version__ = "0.1.0"
