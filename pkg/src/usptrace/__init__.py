"""Trace distributions on USp(2g) and their finite-field counterparts."""

__version__ = "0.1.0"
