"""Vortex-ring critical points of Ginzburg-Landau energies at fixed momentum on the flat 3-torus."""

__version__ = "0.1.0"
