"""Canonical forms of symmetric forms on symplectic spaces and of Hamiltonian matrices."""

__version__ = "0.1.0"
