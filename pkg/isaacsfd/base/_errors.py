"""
Exception hierarchy shared by every isaacsfd subpackage.

All errors derive from :class:`IsaacsFDError` so that callers (the CLI in
particular) can map whole families onto exit codes.
"""

__all__ = [
    'IsaacsFDError',
    'StencilError', 'InsufficientStencil', 'SingularInput', 'StencilEscape',
    'GridError', 'EmptyInterior', 'NonFiniteValue', 'GridMismatch', 'NonNestedGrids',
    'ProblemError', 'EllipticityViolation', 'NegativeC',
    'SolverError', 'DegenerateStencil', 'MaxIterExceeded', 'ComparisonViolation',
    'ExperimentError', 'OrderingViolation', 'DegenerateFit', 'ConfigurationError',
]


class IsaacsFDError(Exception):
    """Base class of every error raised by isaacsfd."""


class _WitnessMixin:
    """
    Carries the grid location at which an invariant failed.

    Attributes
    ----------
    witness : dict or None
        ``{'index': int, 'point': tuple, ...}`` describing the offending point.
    """
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# -- stencil ------------------------------------------------------------------

class StencilError(IsaacsFDError):
    pass


class InsufficientStencil(StencilError):
    """The direction set cannot represent the diffusion with the requested weight floor.

    Increase the max-norm bound of the direction set for this ellipticity.
    """


class SingularInput(StencilError, ValueError):
    """Coefficient matrix is not symmetric, not square or not finite."""


class StencilEscape(StencilError):
    """A stencil neighbour lies outside the lattice set G_h."""


# -- grid ---------------------------------------------------------------------

class GridError(IsaacsFDError):
    pass


class EmptyInterior(GridError):
    """No lattice point has its whole stencil ball inside the domain."""


class NonFiniteValue(GridError, ValueError):
    pass


class GridMismatch(GridError, ValueError):
    pass


class NonNestedGrids(GridError):
    """Coarse lattices are not sub-lattices of the finest one."""


# -- problem ------------------------------------------------------------------

class ProblemError(IsaacsFDError):
    pass


class EllipticityViolation(ProblemError):
    pass


class NegativeC(ProblemError):
    pass


# -- solver -------------------------------------------------------------------

class SolverError(IsaacsFDError):
    pass


class DegenerateStencil(SolverError):
    pass


class MaxIterExceeded(SolverError):
    """
    Iteration cap reached before the residual target.

    Attributes
    ----------
    solution : GridFunction
        Best iterate found.
    report : SolverReport
        Report of the failed run (``converged`` is False).
    """
    def __init__(self, message, solution=None, report=None):
        super().__init__(message)
        self.solution = solution
        self.report = report


class ComparisonViolation(_WitnessMixin, SolverError):
    pass


# -- experiments --------------------------------------------------------------

class ExperimentError(IsaacsFDError):
    pass


class OrderingViolation(_WitnessMixin, ExperimentError):
    pass


class DegenerateFit(ExperimentError):
    """Rate fitting needs at least three strictly positive errors."""


class ConfigurationError(ExperimentError, ValueError):
    pass
