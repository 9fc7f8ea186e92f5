"""Coding polygons, light cones and directional entropy for Z^2 shifts."""

__version__ = "0.1.0"
