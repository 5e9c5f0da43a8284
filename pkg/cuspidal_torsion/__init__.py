"""Cuspidal Torsion - exact torsion structures of (generalized) Jacobians of X0(N)."""

__version__ = "0.1.0"
