"""Finite measurement spaces: quantales, sober lattices, groupoid algebras and observers."""

__version__ = "0.1.0"
