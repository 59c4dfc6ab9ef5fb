"""Comparison of weighted Rademacher tails with the Gaussian tail.

Submodules
----------
gaussian
    Accurate ``phi``, ``Q = 1 - Phi``, the Mills ratio, the constants, and
    interval enclosures.
bounds
    The piecewise majorant ``h1``, the overshoot ``K`` and their enclosures.
rademacher
    Exact and Monte Carlo tails of weighted Rademacher sums.
verifier
    Branch-and-bound certification, the induction replay, worst-case search.
"""

from .bounds import K, K_interval, edelman_bound, g, h, h1, h1_branch, u, v
from .errors import BudgetError, DomainError, RangeError, SplitRequired
from .gaussian import Constants, constants, gauss_tail, mills_ratio, phi
from .interval import Interval
from .rademacher import (
    Weights,
    atom_distribution,
    equal_weights_tail,
    exact_tail,
    mc_tail,
    normalize,
    random_weights,
    ratio_curve,
    selfnorm_mc_tail,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "Constants",
    "DomainError",
    "Interval",
    "K",
    "K_interval",
    "RangeError",
    "SplitRequired",
    "Weights",
    "atom_distribution",
    "constants",
    "edelman_bound",
    "equal_weights_tail",
    "exact_tail",
    "g",
    "gauss_tail",
    "h",
    "h1",
    "h1_branch",
    "mc_tail",
    "mills_ratio",
    "normalize",
    "phi",
    "random_weights",
    "ratio_curve",
    "selfnorm_mc_tail",
    "u",
    "v",
]
