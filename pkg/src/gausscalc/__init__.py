"""Gauss diagram calculus for usual, virtual and welded string links."""

__version__ = "0.1.0"
