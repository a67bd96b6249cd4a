"""Exact engine for Ext groups over finite-field local rings and their
numerical-function subfunctors."""

__version__ = "0.1.0"
