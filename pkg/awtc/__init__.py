"""Desk-scale laboratory for adversarial wiretap codes."""

__version__ = "0.1.0"
