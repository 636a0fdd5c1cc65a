"""
Finite-difference operators: symbols and the continuous operator, pointwise
reference evaluations, and the assembled whole-grid operator.
"""

from isaacsfd.operators.symbols import (Symbol, ellipticity_margin, evaluate_symbol, inf_sup,
                                        payoff_table, sup_inf)
from isaacsfd.operators.finite_difference import (apply_H_h, apply_L_continuous, apply_L_h,
                                                  consistency_gap, delta2_h, delta_h)
from isaacsfd.operators.assembly import DiscreteOperator

__all__ = ['Symbol', 'ellipticity_margin', 'evaluate_symbol', 'inf_sup', 'payoff_table', 'sup_inf',
           'apply_H_h', 'apply_L_continuous', 'apply_L_h', 'consistency_gap', 'delta2_h', 'delta_h',
           'DiscreteOperator']
