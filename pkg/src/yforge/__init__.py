"""Exact computations with extremal projectors, Fock spaces and Yangian modules."""

__version__ = "0.1.0"
