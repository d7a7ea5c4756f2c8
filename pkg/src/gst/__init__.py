"""Numerics for growth spaces, singular inner functions and entropy sets."""

__version__ = "0.1.0"
