"""Lattice diagram determinants, their derivative spaces, and k-hole sums."""

__version__ = "0.1.0"
