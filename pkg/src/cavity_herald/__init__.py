"""Simulation and optimization of repeated spin-photon phase encoding for heralded entanglement."""

__version__ = "0.1.0"
