"""Numerical core, simulator and report writers."""
