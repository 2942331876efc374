"""Typed reversible combinators with a partial-injection oracle, reversible
arrows and a finite-relations lab."""

__version__ = "0.1.0"
