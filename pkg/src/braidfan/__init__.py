"""Braid fans, nested Braid fans and their deformation cones, exactly."""

__version__ = "0.1.0"
