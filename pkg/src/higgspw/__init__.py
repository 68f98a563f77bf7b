"""Exact enumerative computations on the rank-2 Higgs moduli space."""
__version__ = "0.1.0"
