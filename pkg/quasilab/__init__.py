"""Numerical laboratory for n-quasi [m,d]-operators."""

__version__ = "1.0.0"
