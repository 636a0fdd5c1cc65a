"""
The base class of the discrete solvers, with their configuration and report.
Kept private; use :func:`isaacsfd.solvers.solve`.
"""

import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from isaacsfd.base import ConfigurationError
from isaacsfd.grid import GridFunction

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = []

METHODS = ('jacobi', 'gauss-seidel', 'policy')
POLICY_LINEAR = ('direct', 'sweep')
SWEEP_MAX_ITER = 10 ** 6
POLICY_MAX_ITER = 100


@dataclass
class SolverConfig():
    """
    Parameters
    ----------
    method : {'jacobi', 'gauss-seidel', 'policy'}
    theta : float
        Damping of the monotone step, in ``(0, 1]``.
    tol : float, optional
        Residual target; ``1e-9 * (1 + sup|f|)`` when omitted.
    max_iter : int, optional
        Sweep cap for ``jacobi``/``gauss-seidel``, outer cap for ``policy``.
    report_every : int
        Residual history cadence, in iterations.
    policy_linear : {'direct', 'sweep'}
        How frozen-control linear systems are solved.
    basis_floor : float
        Required floor on the coordinate weights of every decomposition.
    """
    method: str = 'policy'
    theta: float = 1.0
    tol: float = None
    max_iter: int = None
    report_every: int = 100
    policy_linear: str = 'sweep'
    basis_floor: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0.0 < self.theta <= 1.0:
            raise ConfigurationError(f"theta must lie in (0, 1], got {self.theta}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigurationError(f"tol must be positive, got {self.tol}")
        if self.max_iter is not None and self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.report_every < 1:
            raise ConfigurationError("report_every must be at least 1")
        if self.policy_linear not in POLICY_LINEAR:
            raise ConfigurationError(f"policy_linear must be one of {POLICY_LINEAR}, got {self.policy_linear!r}")
        if self.basis_floor < 0:
            raise ConfigurationError("basis_floor must be nonnegative")

    def resolved_tol(self, forcing_bound):
        return self.tol if self.tol is not None else 1e-9 * (1.0 + forcing_bound)

    def resolved_max_iter(self):
        if self.max_iter is not None:
            return self.max_iter
        return POLICY_MAX_ITER if self.method == 'policy' else SWEEP_MAX_ITER

    def replace(self, **changes):
        values = asdict(self)
        values.update(changes)
        return SolverConfig(**values)


@dataclass
class SolverReport():
    """
    Outcome of one solve.

    ``converged`` holds exactly when ``residual <= tol``.
    """
    method: str
    tol: float
    iterations: int = 0
    residual: float = np.inf
    history: list = field(default_factory=list)
    seconds: float = 0.0
    basis_floor: float = 0.0
    components: int = 1
    linear_solves: int = 0
    fallback: bool = False

    @property
    def converged(self):
        return bool(self.residual <= self.tol)

    def to_dict(self):
        out = asdict(self)
        out['converged'] = self.converged
        out['history'] = [[int(k), float(r)] for k, r in self.history]
        return out


class MonotoneSolver():
    """
    Base class of the solvers of ``H_h[v] = 0`` on ``G_h^o``, ``v = 0`` on ``dG_h``.

    Subclasses implement :meth:`_iterate`, which advances the interior values
    in place and returns the number of iterations spent.

    Parameters
    ----------
    operator : DiscreteOperator
    config : SolverConfig
    """
    method = None

    def __init__(self, operator, config):
        self.operator = operator
        self.grid = operator.grid
        self.config = config
        self.tol = config.resolved_tol(operator.forcing_bound())
        self.max_iter = config.resolved_max_iter()

    def _iterate(self, values, report):
        raise NotImplementedError()

    def _record(self, report, k, residual):
        if k % self.config.report_every == 0:
            report.history.append((k, residual))
            log.debug("%s iteration %d: residual %.3e", self.method, k, residual)

    def solve(self, initial=None):
        """
        Run from ``initial`` (zero when omitted) until the residual target or the cap.

        Returns
        -------
        solution : GridFunction
        report : SolverReport
        """
        values = np.zeros(self.grid.size)
        if initial is not None:
            values[self.grid.interior] = np.asarray(initial.values if isinstance(initial, GridFunction)
                                                    else initial, dtype=float)[self.grid.interior]
        report = SolverReport(method=self.method, tol=self.tol, basis_floor=self.operator.min_basis_floor,
                              components=int(self.grid.components()))
        start = time.perf_counter()
        report.residual = self.operator.residual(values)
        report.history.append((0, report.residual))
        if report.residual > self.tol:
            report.iterations = self._iterate(values, report)
            report.residual = self.operator.residual(values)
        report.seconds = time.perf_counter() - start
        if report.converged:
            log.info("%s converged in %d iterations (residual %.3e, %.3f s)", self.method, report.iterations,
                     report.residual, report.seconds)
        else:
            log.warning("%s stopped after %d iterations with residual %.3e > tol %.3e", self.method,
                        report.iterations, report.residual, self.tol)
        return GridFunction(self.grid, values), report
