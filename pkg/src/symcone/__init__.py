"""Exact symmetry and null-cone computations for singular matrix spaces."""

__version__ = "0.1.0"
