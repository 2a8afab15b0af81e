"""Polynomial functions on upper triangular matrix algebras."""

__version__ = "0.1.0"
