"""Exact computer algebra for cones over Segre products and their blow-ups."""

__version__ = "0.1.0"
