"""
Direction sets and monotone decompositions of elliptic coefficients.
"""

from isaacsfd.stencil.directions import Direction, DirectionSet, generate_lambda
from isaacsfd.stencil.decomposition import (Decomposition, DecompositionCache, decompose,
                                            decompose_diffusion, split_drift)

__all__ = ['Direction', 'DirectionSet', 'generate_lambda', 'Decomposition',
           'DecompositionCache', 'decompose', 'decompose_diffusion', 'split_drift']
