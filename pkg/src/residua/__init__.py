"""Exact arithmetic for rings of residues over Prüfer extensions."""

__version__ = "0.1.0"
