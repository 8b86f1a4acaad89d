"""Exact computations around canonical subgroups, Hecke dynamics and windows."""

from .field import Field, FieldElem
from .series import TruncSeries

__version__ = "0.1.0"

__all__ = ["Field", "FieldElem", "TruncSeries", "__version__"]
