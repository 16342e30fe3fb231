"""Verification workbench for k-graphs, skew products and Cuntz-Krieger algebras."""

__version__ = "0.1.0"
