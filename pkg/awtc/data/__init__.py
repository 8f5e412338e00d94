"""Bundled code files."""
