"""Prediction-guided solver for smooth Boolean polynomial integer programs.

The toolkit maximizes a degree-d polynomial with beta-smooth coefficients
over {0,1}^n by linearizing the objective around an oracle prediction,
solving an LP relaxation for every candidate prediction error, rounding the
fractional optima, and returning the best integral solution found.  Problem
encoders for MAX-CUT, MAX-k-SAT, and MAX-k-CSP are included, along with the
theoretical bound calculators matching each stage.
"""

__version__ = "0.1.0"

from .pipeline import (
    Instance,
    SolveConfig,
    SolveReport,
    approx_ratio_bound,
    exact_solve,
    guarantee_bound,
    solve,
    solve_constrained,
)
from .poly import Polynomial, decompose, evaluate, min_smoothness
from .relax import (
    ConstrainedProgram,
    build_constrained_relaxation,
    build_relaxation,
    gap_bound,
)
from .rounding import greedy_round, randomized_round, rounding_error_bound

__all__ = [
    "ConstrainedProgram",
    "Instance",
    "Polynomial",
    "SolveConfig",
    "SolveReport",
    "approx_ratio_bound",
    "build_constrained_relaxation",
    "build_relaxation",
    "decompose",
    "evaluate",
    "exact_solve",
    "gap_bound",
    "greedy_round",
    "guarantee_bound",
    "min_smoothness",
    "randomized_round",
    "rounding_error_bound",
    "solve",
    "solve_constrained",
]
