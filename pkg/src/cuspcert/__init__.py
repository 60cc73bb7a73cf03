"""Certify anisotropic tori and characters in general position for classical groups."""

__version__ = "0.1.0"
