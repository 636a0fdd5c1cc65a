"""
Isaacs problem definitions, manufactured solutions, the Pucci majorant and
the truncated (fused) problems, plus the named problem catalog.
"""

from isaacsfd.problems._problem_base import (CoefficientSet, Coefficients, IsaacsProblem,
                                             build_problem, manufacture, validate_problem)
from isaacsfd.problems.pucci import PucciFamily, make_pucci
from isaacsfd.problems.fusion import MAX_FUSE, MIN_FUSE, FusedProblem, fuse
from isaacsfd.problems.catalog import CATALOG, build_catalog_problem, catalog_names

__all__ = ['CoefficientSet', 'Coefficients', 'IsaacsProblem', 'build_problem', 'manufacture',
           'validate_problem', 'PucciFamily', 'make_pucci', 'MAX_FUSE', 'MIN_FUSE', 'FusedProblem',
           'fuse', 'CATALOG', 'build_catalog_problem', 'catalog_names']
