"""Numerical laboratory for the exclusion principle and the stability of matter."""

__version__ = "0.1.0"
