"""Converse bounds and recovery benchmarks for causal network support recovery."""

from .bht import (
    Example1Params,
    MixturePair,
    bhattacharyya,
    dirichlet_experiment,
    exact_pe,
    example1_rho,
    lb_direct,
    lb_direct_rho_variant,
    lb_side_info,
    lb_side_info_from_rhos,
    lb_side_info_rho_variant,
    lb_weak,
    ub_pe,
)
from .linalg import (
    GaussianSpec,
    NotPositiveDefiniteError,
    StabilityError,
    gaussian_bc,
    logdet_pd,
    solve_discrete_lyapunov,
    spectral_radius,
)
from .metrics import (
    ConfusionCounts,
    DegenerateBatchError,
    auc_bound_numerical,
    auc_bound_shapiro,
    auc_bound_simple,
    column_supports,
    error_ratios,
    mip,
    roc_sweep,
)
from .model import (
    ModelParams,
    SignedSupport,
    observation_covariance,
    sample_dynamic_er,
    scale_to_radius,
    simulate_trajectory,
    zero_start_covariance,
)
from .network_bounds import (
    BoundEstimate,
    DegeneratePriorError,
    EdgeWeights,
    RocPoint,
    default_pi_grid,
    direct_network_bound,
    edge_weights,
    pair_rho,
    prop4_bound,
    prop4_bound_from_rhos,
    prop4_rho_samples,
    roc_upper_envelope,
)
from .recovery import (
    DesignPair,
    LassoConfig,
    LassoSupport,
    OcseConfig,
    OcseSupport,
    lasso_column,
    lasso_support,
    ocse_parents,
    ocse_support,
)
from .seeding import derive_rng

__version__ = "0.1.0"

__all__ = [
    "BoundEstimate",
    "ConfusionCounts",
    "DegenerateBatchError",
    "DegeneratePriorError",
    "DesignPair",
    "EdgeWeights",
    "Example1Params",
    "GaussianSpec",
    "LassoConfig",
    "LassoSupport",
    "MixturePair",
    "ModelParams",
    "NotPositiveDefiniteError",
    "OcseConfig",
    "OcseSupport",
    "RocPoint",
    "SignedSupport",
    "StabilityError",
    "auc_bound_numerical",
    "auc_bound_shapiro",
    "auc_bound_simple",
    "bhattacharyya",
    "column_supports",
    "default_pi_grid",
    "derive_rng",
    "direct_network_bound",
    "dirichlet_experiment",
    "edge_weights",
    "error_ratios",
    "exact_pe",
    "example1_rho",
    "gaussian_bc",
    "lasso_column",
    "lasso_support",
    "lb_direct",
    "lb_direct_rho_variant",
    "lb_side_info",
    "lb_side_info_from_rhos",
    "lb_side_info_rho_variant",
    "lb_weak",
    "logdet_pd",
    "mip",
    "observation_covariance",
    "ocse_parents",
    "ocse_support",
    "pair_rho",
    "prop4_bound",
    "prop4_bound_from_rhos",
    "prop4_rho_samples",
    "roc_sweep",
    "roc_upper_envelope",
    "sample_dynamic_er",
    "scale_to_radius",
    "simulate_trajectory",
    "solve_discrete_lyapunov",
    "spectral_radius",
    "ub_pe",
    "zero_start_covariance",
]
