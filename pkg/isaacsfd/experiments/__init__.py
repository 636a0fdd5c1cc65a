"""
Experiment drivers: configuration, convergence studies, the truncation
sandwich and the command line.
"""

from isaacsfd.experiments.config import ExperimentConfig, load_config
from isaacsfd.experiments.convergence import ConvergenceRow, ConvergenceTable, run_convergence
from isaacsfd.experiments.sandwich import SandwichReport, SandwichRow, run_sandwich

__all__ = ['ExperimentConfig', 'load_config', 'ConvergenceRow', 'ConvergenceTable', 'run_convergence',
           'SandwichReport', 'SandwichRow', 'run_sandwich']
