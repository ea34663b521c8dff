"""Computational verification of Grosswald's conjecture on least primitive roots (under GRH)."""

__version__ = "0.1.0"
