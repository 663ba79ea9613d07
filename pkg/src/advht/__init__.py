"""Memory-constrained adversarial binary hypothesis testing toolkit.

Compute optimal error exponents over convex sets of distributions, build
the randomized birth-and-death detector that achieves them, certify its
one-step drift conditions exactly, and measure worst-case asymptotic error
via an adversary MDP and Monte Carlo simulation.
"""

__version__ = "0.1.0"

from .model import (
    Alphabet,
    Distribution,
    DistributionPolytope,
    ParseError,
    ProblemInstance,
    ValidationError,
    WeightPair,
    expectation,
    instance_from_dict,
    load_instance,
    normalize_weight_pair,
    random_instance,
    save_instance,
)
from .exponents import (
    FsmRateSet,
    TheoremBounds,
    bounds_for_S,
    gamma_hc,
    gamma_ratio,
    hellman_pe,
    rate_set,
)
from .simplex import LinearFeasibilityProblem, SimplexError, lp_feasible

__all__ = [
    "Alphabet",
    "Distribution",
    "DistributionPolytope",
    "FsmRateSet",
    "LinearFeasibilityProblem",
    "ParseError",
    "ProblemInstance",
    "SimplexError",
    "TheoremBounds",
    "ValidationError",
    "WeightPair",
    "bounds_for_S",
    "expectation",
    "gamma_hc",
    "gamma_ratio",
    "hellman_pe",
    "instance_from_dict",
    "load_instance",
    "lp_feasible",
    "normalize_weight_pair",
    "random_instance",
    "rate_set",
    "save_instance",
    "__version__",
]
