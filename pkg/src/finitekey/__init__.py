"""Finite-key QKD secret-key rates from von Neumann and min-entropy bounds."""

from .engine import (
    Bound,
    LeakAt,
    RateBreakdown,
    SecurityBudget,
    YieldKind,
    YieldModel,
    delta_correction,
    find_threshold_n0,
    key_rate,
    optimize_rate,
    yields,
)
from .entropy import (
    binary_entropy,
    d_ary_entropy,
    leak_ec,
    min_entropy_from_pguess,
    pguess,
    vn_entropy,
)
from .exceptions import BudgetError, ConvergenceError, DomainError, ThresholdNotFoundError
from .protocol import ChannelModel, Family, PeScheme, ProtocolSpec

__version__ = "0.1.0"

__all__ = [
    "Bound",
    "BudgetError",
    "ChannelModel",
    "ConvergenceError",
    "DomainError",
    "Family",
    "LeakAt",
    "PeScheme",
    "ProtocolSpec",
    "RateBreakdown",
    "SecurityBudget",
    "ThresholdNotFoundError",
    "YieldKind",
    "YieldModel",
    "binary_entropy",
    "d_ary_entropy",
    "delta_correction",
    "find_threshold_n0",
    "key_rate",
    "leak_ec",
    "min_entropy_from_pguess",
    "optimize_rate",
    "pguess",
    "vn_entropy",
    "yields",
]
