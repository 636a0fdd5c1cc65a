"""
Domains, lattice grids and grid functions.
"""

from isaacsfd.grid._domain_base import Domain
from isaacsfd.grid.domains import Ball, Ellipsoid, LevelSetDomain, interval
from isaacsfd.grid.lattice import Grid, GridFunction, build_grid, restrict, sup_diff

__all__ = ['Domain', 'Ball', 'Ellipsoid', 'LevelSetDomain', 'interval',
           'Grid', 'GridFunction', 'build_grid', 'restrict', 'sup_diff']
