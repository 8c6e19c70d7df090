"""Flat connections, Chern-Simons values and their quantization on lattice doubles.

Submodules
----------
lie        matrix Lie group kernels for U(1), SU(2), SO(3), U(2)
groups     structure-group catalog, ``n_G`` estimation, granularity
surface    surface representation varieties: solver, paths, restrictions
lattice    lattice connections, curvature, Chern-Simons values and jumps
holonomy   loop holonomy and cover-valued holonomy
doubling   double decomposition, temporal gauge, quantization, gluing ledger
heatflow   Yang-Mills gradient flow
io         JSON and FCS1 serialization
cli        ``flatcs`` command-line harness
"""
from . import config, doubling, errors, groups, heatflow, holonomy, io, lattice, lie, surface

__version__ = "0.1.0"

__all__ = ["config", "doubling", "errors", "groups", "heatflow", "holonomy", "io", "lattice", "lie", "surface"]
