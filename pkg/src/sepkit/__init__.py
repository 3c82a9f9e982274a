"""Certified root separation and absolute root separation of integer polynomials."""

__version__ = "0.1.0"
