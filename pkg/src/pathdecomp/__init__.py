"""Exact path decompositions of small graphs and checks of Gallai-type bounds."""

__version__ = "0.1.0"
