"""Workbench package: exact algebra, branch data, weights, bounds and probes."""

__all__ = ["__version__"]

__version__ = "0.1.0"
