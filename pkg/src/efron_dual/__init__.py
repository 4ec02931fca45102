"""Exact and Monte Carlo checks of the volume / vertex-count duality for random polytopes."""

__version__ = "0.1.0"
