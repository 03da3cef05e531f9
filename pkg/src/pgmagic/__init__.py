"""Pseudomagic functions on finite projective spaces P^n(q)."""

__version__ = "0.1.0"
