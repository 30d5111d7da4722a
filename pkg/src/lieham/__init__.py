"""Lie–Hamilton systems on the plane: symbolic verification and numerics."""

__version__ = "0.1.0"
