"""Pseudospectral laboratory for a nonlocal three-component Camassa-Holm system."""

from .grid import Field, Grid, make_grid
from .state import StateTriple, energy, potentials

__all__ = ["Field", "Grid", "StateTriple", "energy", "make_grid", "potentials"]
__version__ = "0.1.0"
