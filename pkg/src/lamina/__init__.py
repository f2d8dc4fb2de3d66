"""Laminations of the circle for the quadratic family: parameter leaves, kneading, visibility and tuning."""

__version__ = "0.1.0"
