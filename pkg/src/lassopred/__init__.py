"""lassopred: exact asymptotic error prediction for the generalized LASSO.

The library predicts the small-noise normalized squared error of the
squared-residual LASSO from the Gaussian distance to the scaled
subdifferential, finds the optimal regularization parameter, locates the
robustness phase transition, and validates everything with a reproducible
Monte Carlo harness that solves actual instances.
"""

__version__ = "0.1.0"

from .errors import (
    BelowPhaseTransitionError,
    CapTooSmallError,
    DomainError,
    InnerMinimizerUnboundedError,
    NoInteriorMinimumError,
    OutOfRegionError,
)
from .gauss import DistancePair, d_min, dc_closed_l1, dc_monte_carlo, q_tail
from .gordon import SaddlePoint, closed_form_saddle, d_tilde, inner_alpha_star, solve_saddle_numeric
from .harness import (
    ExperimentConfig,
    ExperimentSummary,
    TrialResult,
    make_instance,
    run_experiment,
)
from .mapcalc import (
    Geometry,
    Prediction,
    map_inverse,
    map_tau,
    phase_diagnostics,
    predict_nse,
    region,
    tune,
)
from .regularizers import (
    BLOCK_L12,
    L1,
    RegularizerSpec,
    dist_to_subdiff,
    project_subdiff,
    prox,
)
from .solver import ProblemInstance, SolverReport, nse, solve, spectral_norm_sq

__all__ = [
    "BLOCK_L12",
    "BelowPhaseTransitionError",
    "CapTooSmallError",
    "DistancePair",
    "DomainError",
    "ExperimentConfig",
    "ExperimentSummary",
    "Geometry",
    "InnerMinimizerUnboundedError",
    "L1",
    "NoInteriorMinimumError",
    "OutOfRegionError",
    "Prediction",
    "ProblemInstance",
    "RegularizerSpec",
    "SaddlePoint",
    "SolverReport",
    "TrialResult",
    "closed_form_saddle",
    "d_min",
    "d_tilde",
    "dc_closed_l1",
    "dc_monte_carlo",
    "dist_to_subdiff",
    "inner_alpha_star",
    "make_instance",
    "map_inverse",
    "map_tau",
    "nse",
    "phase_diagnostics",
    "predict_nse",
    "project_subdiff",
    "prox",
    "q_tail",
    "region",
    "run_experiment",
    "solve",
    "solve_saddle_numeric",
    "spectral_norm_sq",
    "tune",
]
