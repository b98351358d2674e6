"""Influence-free states on coupled test spaces, and their operator side.

The package has three layers: combinatorial test spaces with their product
constructions and influence/Bayes checks, the Choi representation of linear
maps with positivity cones over it, and the four-party teleportation algebra
that turns an entangled projector into a transfer of operators between
remote factors.  A command-line front end exposes every check with JSON
input and output.
"""

from .linalg import (
    DEFAULT_TOL,
    CapExceededError,
    HermitianOperator,
    as_matrix,
    frobenius,
    hermitian_eig,
    kron,
    min_eig,
    partial_trace,
    partial_transpose,
    permute_systems,
    psd_part,
)
from .testspace import (
    ETestSpace,
    TestSpace,
    is_estate,
    is_positive_weight,
    is_state,
    variation_norm,
    weight_space_dimension,
)
from .coupling import (
    DirectionReport,
    InfluenceVerdict,
    ProductState,
    TwoStageTest,
    backward_tests,
    bayes_mixture_check,
    cartesian_tests,
    condition,
    fns_tests,
    forward_tests,
    is_influence_free,
    is_state_on_two_stage,
    marginal,
    operational_bayes_check,
)
from .choimaps import (
    KrausSet,
    LinearMapChoi,
    apply_map,
    choi_from_conjugation,
    compose_maps,
    hk_representation,
    identity_map,
    is_co_cp,
    is_cp,
    reconstruct_operator,
    state_eval,
    swap_operator,
    trace_condition,
    transpose_in_basis,
    transpose_map,
    unnormalized_q,
)
from .cones import (
    FEAS_TOL,
    ConeVerdict,
    DecompositionCertificate,
    SeesawResult,
    decomposable_sum_membership,
    extremality_probe,
    is_popt,
    is_ppt,
    is_psd,
    popt_minimize,
)
from .teleport import (
    DesideratumReport,
    FourPartyLayout,
    GeneralPivotResult,
    PivotReport,
    antisymmetric_projector,
    bell_projector,
    corollary_check,
    desideratum_violation_demo,
    embed_with_entangled_pair,
    pivot_alice,
    pivot_bob,
    pivot_general,
    sandwich_lemma_check,
    symmetric_projector,
    twisted_bell_projector,
    weyl_basis,
    weyl_operator,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "FEAS_TOL",
    "CapExceededError",
    "HermitianOperator",
    "as_matrix",
    "frobenius",
    "hermitian_eig",
    "kron",
    "min_eig",
    "partial_trace",
    "partial_transpose",
    "permute_systems",
    "psd_part",
    "ETestSpace",
    "TestSpace",
    "is_estate",
    "is_positive_weight",
    "is_state",
    "variation_norm",
    "weight_space_dimension",
    "DirectionReport",
    "InfluenceVerdict",
    "ProductState",
    "TwoStageTest",
    "backward_tests",
    "bayes_mixture_check",
    "cartesian_tests",
    "condition",
    "fns_tests",
    "forward_tests",
    "is_influence_free",
    "is_state_on_two_stage",
    "marginal",
    "operational_bayes_check",
    "KrausSet",
    "LinearMapChoi",
    "apply_map",
    "choi_from_conjugation",
    "compose_maps",
    "hk_representation",
    "identity_map",
    "is_co_cp",
    "is_cp",
    "reconstruct_operator",
    "state_eval",
    "swap_operator",
    "trace_condition",
    "transpose_in_basis",
    "transpose_map",
    "unnormalized_q",
    "ConeVerdict",
    "DecompositionCertificate",
    "SeesawResult",
    "decomposable_sum_membership",
    "extremality_probe",
    "is_popt",
    "is_ppt",
    "is_psd",
    "popt_minimize",
    "DesideratumReport",
    "FourPartyLayout",
    "GeneralPivotResult",
    "PivotReport",
    "antisymmetric_projector",
    "bell_projector",
    "corollary_check",
    "desideratum_violation_demo",
    "embed_with_entangled_pair",
    "pivot_alice",
    "pivot_bob",
    "pivot_general",
    "sandwich_lemma_check",
    "symmetric_projector",
    "twisted_bell_projector",
    "weyl_basis",
    "weyl_operator",
    "__version__",
]
