"""Exact computations with properads over the rationals."""

__version__ = "0.1.0"
