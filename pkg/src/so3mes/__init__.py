"""Maximally entangled two-qubit states as SU(2) elements, traced through the SO(3) ball."""

__version__ = "0.1.0"
