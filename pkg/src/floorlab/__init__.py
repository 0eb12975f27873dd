"""Exact-arithmetic laboratory for nested-floor identities of algebraic numbers."""

__version__ = "0.1.0"
