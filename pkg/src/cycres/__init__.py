"""Exact free resolutions of lattice ideals of strongly connected digraphs."""

__version__ = "0.1.0"
