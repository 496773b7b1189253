"""Finite-truncation numerics for distillability, PPT and Schmidt-number tests
on bipartite states, including truncations of continuous-variable bound
entangled states.
"""

from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .criteria import (
    WitnessValue,
    isotropic_schmidt_bound,
    lambda_p_apply,
    local_filter_invariance_check,
    p_reduction_value,
    partial_transpose,
    ppt_check,
    realignment_value,
)
from .distill import (
    DistillCertificate,
    NotFound,
    certify_distillable,
    density_demo,
    p_stability_radius,
    perturb_and_verify,
    pt_rank2_spectral_decomp,
    rank2_witness_search,
    stability_radius,
)
from .linalg import eig_hermitian, kron, operator_norm, partial_trace, trace_norm
from .protocol import (
    SchmidtCertificate,
    apply_filter,
    filter_from_violation,
    run_protocol,
    truncation_dim_search,
    twirl_exact,
    twirl_sample_oracle,
)
from .states import (
    BipartiteVector,
    CvBesParams,
    DensityOperator,
    cv_bes,
    isotropic,
    maximally_entangled,
    distillable_approximant,
    proof1_approximant,
    purify,
    random_density,
    schmidt_decompose,
    spurious_block_state,
)
from .witness import (
    EdgeWitness,
    build_edge_witness,
    is_edge_state,
    product_vector_in_subspace,
    range_kernel,
    schmidt_probe_search,
    witness_epsilon,
)

__version__ = "0.1.0"
