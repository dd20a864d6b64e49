"""Uniform reversibility of STRIPS actions."""

__version__ = "0.1.0"
