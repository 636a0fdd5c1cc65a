"""
Convergence of the Poisson problem on the unit disk
---------------------------------------------------
This example script measures the sup-norm error of the monotone scheme for
``Delta u + 1 = 0`` on the unit disk against the exact solution
``(1 - |x|^2) / 4`` and fits the empirical rate.

Usage:
    - Build an ExperimentConfig for the catalog problem `poisson-ball`.
    - Call `run_convergence` to solve on each mesh size.
    - Save the table with `save_convergence_table`.

Note:
    - The finest mesh size takes a few seconds with the policy solver.
"""

import logging

from isaacsfd.experiments import ExperimentConfig, run_convergence
from isaacsfd.solvers import SolverConfig
from isaacsfd.tools.file_handling import save_convergence_table


def main():
    """
    Runs the convergence study and writes ``poisson_convergence.csv``.
    """
    logging.basicConfig(level=logging.INFO)

    # Unit disk, stencil directions of max-norm 1
    config = ExperimentConfig(problem='poisson-ball', dims=2, domain='ball', radius=1.0,
                              h_list=(0.2, 0.1, 0.05, 0.025), lambda_m=1,
                              solver=SolverConfig(method='policy'), reference='exact')

    table = run_convergence(config)
    for row in table.rows:
        print(f"h={row.h:<6g} error={row.error:.3e}")
    print(f"fitted rate {table.fitted_rate:.3f} (fit residual {table.fit_residual:.2e})")

    save_convergence_table(table, 'poisson_convergence.csv')


if __name__ == "__main__":
    main()
