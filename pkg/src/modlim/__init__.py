"""Conformal moduli of curve families in graph domains and their vertical limits."""

__version__ = "0.1.0"
