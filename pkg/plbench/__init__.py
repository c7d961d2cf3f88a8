"""Phragmén–Lindelöf workbench for constant-coefficient PDE systems."""
