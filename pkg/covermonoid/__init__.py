"""Exact combinatorics of the cover monoid of a finite abelian group."""

__version__ = "1.0.0"
