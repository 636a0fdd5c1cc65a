"""
Command line interface
----------------------
``isaacsfd solve | converge | sandwich | decompose``. Diagnostics go to
standard error, data to files (``--out``) or standard output.

Exit codes: 0 success, 1 solver non-convergence, 2 configuration error,
3 invariant or ordering violation.
"""

import argparse
import logging
import os
import sys

import numpy as np

from isaacsfd.base import (ComparisonViolation, ConfigurationError, GridError, IsaacsFDError, MaxIterExceeded,
                           OrderingViolation, ProblemError, StencilError)
from isaacsfd.experiments.config import load_config, parse_list
from isaacsfd.experiments.convergence import run_convergence
from isaacsfd.experiments.sandwich import run_sandwich
from isaacsfd.problems import catalog_names
from isaacsfd.solvers import check_comparison, solve
from isaacsfd.stencil import decompose_diffusion, generate_lambda, split_drift
from isaacsfd.tools import file_handling

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['cli_main', 'main', 'exit_code']

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_CONFIGURATION = 2
EXIT_VIOLATION = 3

DEFAULT_OUT = {'solve': 'solution.csv', 'converge': 'convergence.csv', 'sandwich': 'sandwich.csv'}


def exit_code(error):
    """Exit code for an exception raised by a subcommand."""
    if isinstance(error, MaxIterExceeded):
        return EXIT_NOT_CONVERGED
    if isinstance(error, (OrderingViolation, ComparisonViolation)):
        return EXIT_VIOLATION
    if isinstance(error, (ConfigurationError, StencilError, GridError, ProblemError, ValueError)):
        return EXIT_CONFIGURATION
    return EXIT_VIOLATION


def _sibling(path, suffix):
    stem, _ = os.path.splitext(path)
    return f'{stem}_{suffix}.json'


def _add_experiment_flags(parser):
    parser.add_argument('--config', help='flat key = value experiment file')
    parser.add_argument('--problem', choices=catalog_names())
    parser.add_argument('--param', action='append', default=[], metavar='KEY=VALUE',
                        help='problem parameter, repeatable')
    parser.add_argument('--dims', type=int)
    parser.add_argument('--domain', choices=('ball', 'ellipsoid', 'interval'))
    parser.add_argument('--radius', type=float)
    parser.add_argument('--semi-axes', dest='semi_axes')
    parser.add_argument('--lambda-m', dest='lambda_m', type=int, help='max-norm of the stencil directions')
    parser.add_argument('--method', choices=('jacobi', 'gauss-seidel', 'policy'))
    parser.add_argument('--theta', type=float)
    parser.add_argument('--tol', type=float)
    parser.add_argument('--max-iter', dest='max_iter', type=int)
    parser.add_argument('--policy-linear', dest='policy_linear', choices=('direct', 'sweep'))
    parser.add_argument('--basis-floor', dest='basis_floor', type=float)
    parser.add_argument('--seed', type=int, help='seed of problem validation and comparison trials')
    parser.add_argument('--quiet', action='store_true', default=argparse.SUPPRESS,
                        help='only log warnings and errors')
    parser.add_argument('--out')


def build_parser():
    parser = argparse.ArgumentParser(prog='isaacsfd',
                                     description='Monotone finite-difference experiments for Isaacs equations')
    parser.add_argument('--quiet', action='store_true', help='only log warnings and errors')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('solve', help='solve one problem at one mesh size')
    _add_experiment_flags(p)
    p.add_argument('--h', type=float)
    p.add_argument('--comparison-trials', dest='comparison_trials', type=int,
                   help='also check the comparison principle in this many randomized trials')

    p = commands.add_parser('converge', help='convergence study over a list of mesh sizes')
    _add_experiment_flags(p)
    p.add_argument('--h-list', dest='h_list')
    p.add_argument('--reference', choices=('exact', 'finest'))
    p.add_argument('--workers', type=int)
    p.add_argument('--no-timing', dest='timing', action='store_false', default=None,
                   help='write zero seconds so output files are reproducible')

    p = commands.add_parser('sandwich', help='truncation sandwich at one mesh size')
    _add_experiment_flags(p)
    p.add_argument('--h', type=float)
    p.add_argument('--k-list', dest='k_list')
    p.add_argument('--delta-hat', dest='delta_hat', type=float)

    p = commands.add_parser('decompose', help='split a diffusion matrix over the stencil directions')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--matrix', help="rows separated by ';', entries by ','")
    group.add_argument('--matrix-file', dest='matrix_file')
    p.add_argument('--drift', help='optional drift vector')
    p.add_argument('--lambda-m', dest='lambda_m', type=int, default=1)
    p.add_argument('--floor', type=float, default=0.0, help='required coordinate weight')
    p.add_argument('--quiet', action='store_true', default=argparse.SUPPRESS, help='only log warnings and errors')
    return parser


def _overrides(args):
    skip = {'command', 'quiet', 'config', 'param'}
    values = {key: value for key, value in vars(args).items() if key not in skip}
    for item in args.param:
        key, sep, value = item.partition('=')
        if not sep or not key:
            raise ConfigurationError(f"--param expects KEY=VALUE, got {item!r}")
        values[f'param.{key.strip()}'] = value.strip()
    return values


def _read_matrix(args):
    if args.matrix_file:
        return np.atleast_2d(np.loadtxt(args.matrix_file, delimiter=','))
    try:
        return np.array([parse_list(row) for row in args.matrix.split(';')], dtype=float)
    except ValueError:
        raise ConfigurationError(f"Cannot read {args.matrix!r} as a square matrix") from None


def _decompose(args, stdout):
    a = _read_matrix(args)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigurationError(f"Matrix must be square, got shape {a.shape}")
    lambda_set = generate_lambda(a.shape[0], args.lambda_m)
    dec = decompose_diffusion(a, lambda_set, args.floor)
    print('direction,weight', file=stdout)
    for direction, weight in dec.weights().items():
        print(f'"{tuple(direction)}",{weight:.12g}', file=stdout)
    if args.drift:
        drift = split_drift(parse_list(args.drift), lambda_set)
        for direction, weight in zip(lambda_set.directions, drift.first_order):
            print(f'"drift {tuple(direction)}",{weight:.12g}', file=stdout)
    print(f'basis_floor={dec.basis_floor:.12g}', file=stdout)
    return EXIT_OK


def _solve(config, stdout):
    problem = config.build_problem()
    grid = config.build_grid(config.resolved_h())
    solution, report = solve(problem, grid, config.solver)
    out = config.out or DEFAULT_OUT['solve']
    file_handling.save_grid_function(solution, out)
    summary = {'config': config.describe(), 'grid': grid.describe(), 'problem': problem.describe(),
               'report': report.to_dict()}
    print(f'residual={report.residual:.6e} iterations={report.iterations} converged={int(report.converged)}',
          file=stdout)
    try:
        if config.comparison_trials and report.converged:
            summary['comparison'] = check_comparison(problem, grid, config.comparison_trials, config.solver,
                                                     seed=config.seed)
            print(f"comparison_min_increase={summary['comparison']['min_increase']:.6e}", file=stdout)
    finally:
        file_handling.save_to_json(summary, _sibling(out, 'report'))
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def _converge(config, stdout):
    table = run_convergence(config)
    out = config.out or DEFAULT_OUT['converge']
    file_handling.save_convergence_table(table, out, timing=config.timing)
    if table.exact_to_tolerance:
        print('exact to tolerance', file=stdout)
    else:
        print(f'fitted_rate={table.fitted_rate} fit_residual={table.fit_residual}', file=stdout)
    return EXIT_OK


def _sandwich(config, stdout):
    out = config.out or DEFAULT_OUT['sandwich']
    try:
        report = run_sandwich(config)
    except OrderingViolation as error:
        report = getattr(error, 'report', None)
        if report is not None:
            _write_sandwich(report, config, out)
        raise
    _write_sandwich(report, config, out)
    print(f'max_gap={max(row.gap for row in report.rows):.6e} decay_rate={report.decay_rate}', file=stdout)
    return EXIT_OK


def _write_sandwich(report, config, out):
    file_handling.save_sandwich_table(report.rows, out)
    file_handling.save_to_json({'config': config.describe(), **report.to_dict()}, _sibling(out, 'summary'))


COMMANDS = {'solve': _solve, 'converge': _converge, 'sandwich': _sandwich}


def cli_main(argv=None, stdout=None):
    """
    Run one subcommand.

    Returns
    -------
    int
        The exit code.
    """
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return EXIT_CONFIGURATION if stop.code else EXIT_OK
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING if args.quiet else logging.INFO,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        if args.command == 'decompose':
            return _decompose(args, stdout)
        config = load_config(args.config, _overrides(args))
        return COMMANDS[args.command](config, stdout)
    except (IsaacsFDError, ValueError) as error:
        code = exit_code(error)
        log.error("%s: %s", type(error).__name__, error)
        witness = getattr(error, 'witness', None)
        if witness:
            log.error("Witness: %s", witness)
        return code


def main():
    sys.exit(cli_main())
