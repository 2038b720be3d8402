"""Many-body approximation of non-negative tensors.

A tensor is read as a discrete distribution over its index set; choosing
which groups of modes may interact defines a log-linear family, and the
KL-closest member of that family is found by a convex Newton projection.
The package also extracts the resulting multiplicative factors, exports
tensor-ring cores for cyclic interaction structures, and completes missing
entries by alternating projection with observation restore.
"""

from manybody.completion import CompletionOptions, CompletionResult, lbtc
from manybody.coordinates import (
    ETA,
    THETA,
    CoordTensor,
    eta_from_tensor,
    tensor_from_eta,
    tensor_from_theta,
    theta_from_tensor,
)
from manybody.factors import (
    EnergyTerms,
    FactorSet,
    energy_terms,
    export_ring_cores,
    extract_factors,
    load_factors,
    reconstruct_from_factors,
    ring_rank,
    save_factors,
)
from manybody.interactions import (
    InteractionSet,
    count_parameters,
    cyclic_set,
    enumerate_basis,
    m_body_set,
    parse_spec,
)
from manybody.kernels import BACKEND
from manybody.oracle import OracleOptions, ipf_project, marginal
from manybody.projection import (
    ProjectionResult,
    SolverOptions,
    fisher_matrix,
    m_body_approximation,
    project,
)
from manybody.tensor import (
    MaskedTensor,
    as_tensor,
    kl_divergence,
    normalize,
    random_ring_tensor,
    recovery_fit,
    relative_error,
    reshape,
    ring_contract,
    total_sum,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CompletionOptions",
    "CompletionResult",
    "CoordTensor",
    "ETA",
    "EnergyTerms",
    "FactorSet",
    "InteractionSet",
    "MaskedTensor",
    "OracleOptions",
    "ProjectionResult",
    "SolverOptions",
    "THETA",
    "as_tensor",
    "count_parameters",
    "cyclic_set",
    "energy_terms",
    "enumerate_basis",
    "eta_from_tensor",
    "export_ring_cores",
    "extract_factors",
    "fisher_matrix",
    "ipf_project",
    "kl_divergence",
    "lbtc",
    "load_factors",
    "m_body_approximation",
    "m_body_set",
    "marginal",
    "normalize",
    "parse_spec",
    "project",
    "random_ring_tensor",
    "reconstruct_from_factors",
    "recovery_fit",
    "relative_error",
    "reshape",
    "ring_contract",
    "ring_rank",
    "save_factors",
    "tensor_from_eta",
    "tensor_from_theta",
    "theta_from_tensor",
    "total_sum",
]
