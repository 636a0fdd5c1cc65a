import configparser
import json
import os

import numpy as np

from isaacsfd.base import ConfigurationError, GridMismatch
from isaacsfd.grid import GridFunction

CONFIG_SECTION = 'experiment'


def init_directory(directory):
    if directory:
        if not os.path.exists(directory):
            os.makedirs(directory)
    else:
        directory = os.getcwd()

    return directory


def _prepare(path):
    init_directory(os.path.dirname(path))
    return path


def save_grid_function(u, path):
    """
    Write ``x_1, ..., x_d, value`` rows in grid order, with 17 significant digits.
    """
    header = ','.join([f'x_{k + 1}' for k in range(u.grid.dims)] + ['value'])
    table = np.column_stack([u.grid.points, u.values])
    np.savetxt(_prepare(path), table, delimiter=',', header=header, comments='', fmt='%.17g')


def read_grid_function(path, grid):
    """
    Read a solution CSV back onto ``grid``.

    Raises
    ------
    GridMismatch
        If the file's points are not the points of ``grid``.
    """
    table = np.atleast_2d(np.loadtxt(path, delimiter=',', skiprows=1))
    if table.shape != (grid.size, grid.dims + 1) or not np.allclose(table[:, :-1], grid.points,
                                                                    rtol=0.0, atol=1e-12 * (1 + grid.h)):
        raise GridMismatch(f"{path} does not hold a function on {grid!r}")
    return GridFunction(grid, table[:, -1])


def save_convergence_table(table, path, timing=True):
    """``h,n_grid,n_interior,error,iterations,seconds`` plus the fit footer."""
    lines = ['h,n_grid,n_interior,error,iterations,seconds']
    for row in table.rows:
        seconds = row.seconds if timing else 0.0
        lines.append(f'{row.h:.17g},{row.n_grid},{row.n_interior},{row.error:.17g},{row.iterations},{seconds:.6g}')
    lines.append(f'# fitted_rate={_optional(table.fitted_rate)}')
    lines.append(f'# fit_residual={_optional(table.fit_residual)}')
    with open(_prepare(path), 'w') as f:
        f.write('\n'.join(lines) + '\n')


def _optional(value):
    return 'nan' if value is None else f'{value:.17g}'


def save_sandwich_table(rows, path):
    """``K,sup_gap,ordering_ok`` with ``ordering_ok`` as 1/0."""
    lines = ['K,sup_gap,ordering_ok']
    lines += [f'{row.K:.17g},{row.gap:.17g},{int(row.ordering_ok)}' for row in rows]
    with open(_prepare(path), 'w') as f:
        f.write('\n'.join(lines) + '\n')


def save_to_json(data, path):
    with open(_prepare(path), 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True, default=_jsonable)


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serialisable")


def open_json(path):
    with open(path, 'r') as f:
        return json.load(f)


def read_config(path):
    """
    Read a flat ``key = value`` experiment file.

    Lines starting with ``#`` are comments. Returns a dict of strings.

    Raises
    ------
    ConfigurationError
        If the file is missing or malformed.
    """
    if not os.path.isfile(path):
        raise ConfigurationError(f"Config file {path} not found")
    parser = configparser.ConfigParser(comment_prefixes=('#',), inline_comment_prefixes=('#',),
                                       delimiters=('=',), interpolation=None)
    parser.optionxform = str
    try:
        with open(path, 'r') as f:
            parser.read_string(f'[{CONFIG_SECTION}]\n' + f.read(), source=path)
    except configparser.Error as error:
        raise ConfigurationError(f"Cannot parse {path}: {error}") from None
    return dict(parser[CONFIG_SECTION])
