"""Sparse phase retrieval from magnitude-only samples.

Recovers a k-sparse complex signal observed through |a_i^* x| by greedy
subspace refinement: a spectral support initialization followed by
matching / estimation / pruning rounds driven by Wirtinger gradients of
the quartic amplitude-fit loss.
"""

__version__ = "0.1.0"

from .algorithm import SprConfig, matching_indices, run_spr, run_spr_partitioned
from .core import (
    CapacityError,
    DegenerateSignalError,
    DimensionMismatch,
    NumericFailure,
    RecoveryReport,
    SupportSet,
    nmse,
    phase_dist,
    restrict,
    top_k_indices,
)
from .objective import (
    WirtingerGradient,
    WirtingerHessian,
    expected_grad1,
    expected_hessian,
    expected_loss,
    grad1,
    grad1_fourier2d,
    grad1_restricted,
    hessian,
    loss,
    wirtinger_gradient,
)
from .sampling import (
    Fourier2DOperator,
    GaussianOperator,
    gen_gaussian_operator,
    gen_sparse_signal,
    observe,
    observe_fourier2d,
)
from .solver import SolverConfig, SolverOutcome, default_z0, solve_on_support
from .spectral import expected_score, hypergeometric_f, init_support, spectral_scores

__all__ = [
    "__version__",
    "CapacityError",
    "DegenerateSignalError",
    "DimensionMismatch",
    "Fourier2DOperator",
    "GaussianOperator",
    "NumericFailure",
    "RecoveryReport",
    "SolverConfig",
    "SolverOutcome",
    "SprConfig",
    "SupportSet",
    "WirtingerGradient",
    "WirtingerHessian",
    "default_z0",
    "expected_grad1",
    "expected_hessian",
    "expected_loss",
    "expected_score",
    "gen_gaussian_operator",
    "gen_sparse_signal",
    "grad1",
    "grad1_fourier2d",
    "grad1_restricted",
    "hessian",
    "hypergeometric_f",
    "init_support",
    "loss",
    "matching_indices",
    "nmse",
    "observe",
    "observe_fourier2d",
    "phase_dist",
    "restrict",
    "run_spr",
    "run_spr_partitioned",
    "solve_on_support",
    "spectral_scores",
    "top_k_indices",
    "wirtinger_gradient",
]
