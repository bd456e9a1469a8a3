"""Curvature workbench for four-dimensional neutral Walker metrics."""

__version__ = "0.1.0"
