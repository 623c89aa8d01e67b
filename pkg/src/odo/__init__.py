"""Exact computations with commuting ordinary differential operators."""

from odo.errors import OdoError

__version__ = "0.1.0"

__all__ = ["OdoError", "__version__"]
