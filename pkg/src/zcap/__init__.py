"""Approximation by integer-coefficient polynomials on compact subsets of R."""

from .config import DEFAULT, Config
from .core import CompactSet, IntPoly, RealPoly, SupNormResult, contains, parse_set, sup_norm

__version__ = "0.1.0"
