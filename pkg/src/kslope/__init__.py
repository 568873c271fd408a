"""Exact twisted slope stability checks for Kähler classes."""

__version__ = "0.1.0"
