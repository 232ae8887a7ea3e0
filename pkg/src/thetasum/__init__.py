"""Truncated theta sums F_n(z, tau) = sum_{k=0}^n exp(2 pi i (z k + tau k^2)).

The fast evaluator runs in polylogarithmic time in n by repeatedly applying a
modular-type transformation whose remainder is a pair of Mordell integrals.
All arithmetic is done in gmpy2 multiprecision at a bit budget sized from
n and the requested absolute accuracy eps.
"""

from .direct import NormalizedQuery, ThetaQuery, conj_symmetry_check, direct_sum, normalize, phase_term
from .erf import ErfConfig, erf_rot, erf_rot_scaled
from .fast import (RecursionState, RemainderInput, direct_op_count, fast_eval, modular_prefactor,
                   op_counter, remainder_R)
from .mordell import (MordellEval, PSeq, QCoeffs, h_sum_H, h_tail_J, h_tail_J_fast, mordell_eval,
                      mordell_h, p_seq, q_coeffs, shift_count)
from .precision import PrecisionContext, count_ops, exp_2pii, complex_exp_2pii, make_context
from .small_tau import SmallTauState, a_row_advance, small_tau_eval
from .tables import (BernoulliTable, ConvergenceError, EulerTable, LaguerreRule, bernoulli_scaled,
                     euler_numbers, laguerre_rule)

__version__ = "0.1.0"

__all__ = [
    "BernoulliTable", "ConvergenceError", "ErfConfig", "EulerTable", "LaguerreRule",
    "MordellEval", "NormalizedQuery", "PSeq", "PrecisionContext", "QCoeffs", "RecursionState",
    "RemainderInput", "SmallTauState", "ThetaQuery", "a_row_advance", "bernoulli_scaled",
    "complex_exp_2pii", "conj_symmetry_check", "count_ops", "direct_op_count", "direct_sum",
    "erf_rot", "erf_rot_scaled", "euler_numbers", "exp_2pii", "fast_eval", "h_sum_H", "h_tail_J",
    "h_tail_J_fast", "laguerre_rule", "make_context", "modular_prefactor", "mordell_eval",
    "mordell_h", "normalize", "op_counter", "p_seq", "phase_term", "q_coeffs", "remainder_R",
    "shift_count", "small_tau_eval",
]
