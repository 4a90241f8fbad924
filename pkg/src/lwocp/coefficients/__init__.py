"""Exact dependence coefficients on finite-alphabet laws."""

from .checks import (InequalityRecord, InequalityReport, extended_law,
                     rotated_prefix_tv, stationarity_gap, theorem_bounds,
                     verify_inequalities)
from .cyclic import build_rho_lp, rho_lp, rotation_orbits
from .finite import (AugmentedPMF, avg_switch, beta_cond_mixing, beta_mixing,
                     conditional_surrogate, deletion_indices, law,
                     masked_mixture, mixture_switch, switch_coeff, tv)
from .lp import (InfeasibleError, LPError, LPProblem, UnboundedError,
                 solve_lp)

__all__ = [
    "AugmentedPMF", "InequalityRecord", "InequalityReport", "InfeasibleError",
    "LPError", "LPProblem", "UnboundedError", "avg_switch", "beta_cond_mixing",
    "beta_mixing", "build_rho_lp", "conditional_surrogate", "deletion_indices",
    "extended_law", "law", "masked_mixture", "mixture_switch", "rho_lp",
    "rotated_prefix_tv", "rotation_orbits", "solve_lp", "stationarity_gap",
    "switch_coeff", "theorem_bounds", "tv", "verify_inequalities",
]
