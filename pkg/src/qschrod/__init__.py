"""Quantum Schrödinger algebra symmetries of discrete Schrödinger equations."""

__version__ = "0.1.0"
