"""Spectral invariants of quaternionic matrices and trace-class models."""

__version__ = "0.1.0"
