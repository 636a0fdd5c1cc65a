"""
Experiment configuration
------------------------
Experiments are described by flat ``key = value`` pairs, read from a file,
from command-line flags, or both (flags win). Problem parameters use the
``param.<name>`` keys. Known keys:

problem, dims, domain, radius, semi_axes, h, h_list, lambda_m, method,
theta, tol, max_iter, report_every, policy_linear, basis_floor, reference,
k_list, delta_hat, out, seed, comparison_trials, workers, timing, param.<name>
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from isaacsfd.base import ConfigurationError
from isaacsfd.grid import Ball, Ellipsoid, build_grid, interval
from isaacsfd.problems import CATALOG, build_catalog_problem
from isaacsfd.solvers import SolverConfig
from isaacsfd.stencil import generate_lambda
from isaacsfd.tools.file_handling import read_config

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['ExperimentConfig', 'DOMAINS', 'REFERENCES', 'load_config', 'parse_list']

DOMAINS = ('ball', 'ellipsoid', 'interval')
REFERENCES = ('exact', 'finest')
DEFAULT_H = 0.1
DEFAULT_K_LIST = (0.0, 1.0, 2.0, 4.0, 8.0)

_SOLVER_KEYS = {'method': str, 'theta': float, 'tol': float, 'max_iter': int, 'report_every': int,
                'policy_linear': str, 'basis_floor': float}


def parse_list(text, cast=float):
    """``'0.2,0.1, 0.05'`` to a tuple."""
    if isinstance(text, (list, tuple)):
        return tuple(cast(v) for v in text)
    try:
        return tuple(cast(v) for v in str(text).replace(';', ',').split(',') if v.strip())
    except ValueError:
        raise ConfigurationError(f"Cannot read {text!r} as a list of {cast.__name__}") from None


def parse_bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off'):
        return False
    raise ConfigurationError(f"Cannot read {text!r} as a boolean")


def _cast(key, value, cast):
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{key}={value!r} is not a valid {cast.__name__}") from None


@dataclass
class ExperimentConfig():
    """
    Everything needed to reproduce one run.

    ``dims`` defaults to 1 on intervals and 2 otherwise; ``h_list`` and
    ``lambda_m`` default to the catalog entry of the problem. ``seed`` drives the
    validation samples of the problem and the comparison trials of ``solve``.
    """
    problem: str = 'poisson-ball'
    params: dict = field(default_factory=dict)
    dims: int = None
    domain: str = 'ball'
    radius: float = 1.0
    semi_axes: tuple = None
    h: float = None
    h_list: tuple = None
    lambda_m: int = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    reference: str = 'exact'
    k_list: tuple = DEFAULT_K_LIST
    delta_hat: float = 0.5
    out: str = None
    seed: int = 0
    comparison_trials: int = 0
    workers: int = 1
    timing: bool = True

    def __post_init__(self):
        if self.problem not in CATALOG:
            raise ConfigurationError(f"Unknown problem {self.problem!r}; choose from {', '.join(sorted(CATALOG))}")
        if self.domain not in DOMAINS:
            raise ConfigurationError(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        if self.reference not in REFERENCES:
            raise ConfigurationError(f"reference must be one of {REFERENCES}, got {self.reference!r}")
        if self.domain == 'interval':
            if self.dims not in (None, 1):
                raise ConfigurationError("The interval domain is one-dimensional")
            self.dims = 1
        elif self.domain == 'ellipsoid' and self.semi_axes is not None and self.dims is None:
            self.dims = len(self.semi_axes)
        self.dims = 2 if self.dims is None else int(self.dims)
        if self.dims < 1:
            raise ConfigurationError("dims must be at least 1")
        if not self.radius > 0:
            raise ConfigurationError("radius must be positive")
        if self.semi_axes is not None:
            if self.domain != 'ellipsoid':
                raise ConfigurationError("semi_axes apply to the ellipsoid domain only; use radius")
            self.semi_axes = tuple(float(s) for s in self.semi_axes)
            if len(self.semi_axes) != self.dims or min(self.semi_axes) <= 0:
                raise ConfigurationError(f"semi_axes must be {self.dims} positive numbers")
        elif self.domain == 'ellipsoid':
            raise ConfigurationError("The ellipsoid domain needs semi_axes")
        if self.h is not None and not self.h > 0:
            raise ConfigurationError("h must be positive")
        if self.h_list is not None:
            self.h_list = tuple(float(h) for h in self.h_list)
            if min(self.h_list) <= 0 or any(a <= b for a, b in zip(self.h_list, self.h_list[1:])):
                raise ConfigurationError(f"h_list must be positive and strictly decreasing, got {self.h_list}")
        if self.lambda_m is not None and self.lambda_m < 1:
            raise ConfigurationError("lambda_m must be at least 1")
        self.k_list = tuple(float(k) for k in self.k_list)
        if not 0 < self.delta_hat <= 1:
            raise ConfigurationError("delta_hat must lie in (0, 1]")
        if self.comparison_trials < 0:
            raise ConfigurationError("comparison_trials must be nonnegative")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")

    @property
    def entry(self):
        return CATALOG[self.problem]

    def resolved_semi_axes(self):
        if self.semi_axes is not None:
            return np.array(self.semi_axes)
        return np.full(self.dims, self.radius)

    def resolved_h_list(self):
        return self.h_list if self.h_list is not None else tuple(self.entry.default_h_list)

    def resolved_h(self):
        return self.h if self.h is not None else DEFAULT_H

    def resolved_lambda_m(self):
        return self.lambda_m if self.lambda_m is not None else self.entry.lambda_m

    def build_domain(self):
        if self.domain == 'interval':
            return interval(self.radius)
        if self.domain == 'ball':
            return Ball(np.zeros(self.dims), self.radius)
        return Ellipsoid(self.semi_axes)

    def build_problem(self):
        return build_catalog_problem(self.problem, self.dims, self.resolved_semi_axes(), self.params, self.seed)

    def direction_set(self):
        return generate_lambda(self.dims, self.resolved_lambda_m())

    def build_grid(self, h, lambda_set=None):
        return build_grid(self.build_domain(), h, self.direction_set() if lambda_set is None else lambda_set)

    def describe(self):
        return {'problem': self.problem, 'params': dict(self.params), 'dims': self.dims, 'domain': self.domain,
                'radius': self.radius, 'semi_axes': None if self.semi_axes is None else list(self.semi_axes),
                'h': self.h, 'h_list': list(self.resolved_h_list()), 'lambda_m': self.resolved_lambda_m(),
                'solver': self.solver.__dict__.copy(), 'reference': self.reference, 'k_list': list(self.k_list),
                'delta_hat': self.delta_hat, 'seed': self.seed, 'comparison_trials': self.comparison_trials,
                'workers': self.workers, 'timing': self.timing}

    @classmethod
    def from_mapping(cls, values):
        """
        Build from string values keyed as in a config file.

        Raises
        ------
        ConfigurationError
            For unknown keys or unreadable values.
        """
        values = dict(values)
        kwargs = {'params': {}}
        solver = {}
        for key, value in values.items():
            if value is None:
                continue
            if key.startswith('param.'):
                kwargs['params'][key[len('param.'):]] = value
            elif key in _SOLVER_KEYS:
                solver[key] = _cast(key, value, _SOLVER_KEYS[key])
            elif key in ('problem', 'domain', 'reference', 'out'):
                kwargs[key] = str(value)
            elif key in ('dims', 'lambda_m', 'seed', 'comparison_trials', 'workers'):
                kwargs[key] = _cast(key, value, int)
            elif key in ('radius', 'h', 'delta_hat'):
                kwargs[key] = _cast(key, value, float)
            elif key in ('semi_axes', 'h_list', 'k_list'):
                kwargs[key] = parse_list(value)
            elif key == 'timing':
                kwargs[key] = parse_bool(value)
            else:
                raise ConfigurationError(f"Unknown configuration key {key!r}")
        kwargs['solver'] = SolverConfig(**solver)
        return cls(**kwargs)


def load_config(path=None, overrides=None):
    """
    Merge a config file with overriding values and build the configuration.

    Parameters
    ----------
    path : str, optional
        Flat ``key = value`` file.
    overrides : dict, optional
        Values taking precedence over the file; ``None`` values are ignored.
    """
    values = read_config(path) if path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    log.debug("Experiment values: %s", values)
    return ExperimentConfig.from_mapping(values)
