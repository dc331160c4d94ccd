"""Hermitian forms and invariant groups of proper rational maps between balls."""

from .polynomials import (
    MultiIndex,
    Polynomial,
    TAU_EQ,
    TAU_ZERO,
    max_coeff_diff,
    polys_close,
    substitute_fractional,
)
from .maps import (
    BallAutomorphism,
    MapConstructionError,
    RationalMap,
    Subspace,
    apply_automorphism,
    automorphism,
    catalog,
    compose_automorphisms,
    compose_source,
    compose_target,
    descend,
    first_descendant,
    identity_automorphism,
    identity_map,
    inverse_automorphism,
    juxtapose_lambda,
    juxtapose_theta,
    lowest_order_subspace,
    make_rational_map,
    oplus,
    pad_with_zeros,
    permutation_automorphism,
    polynomial_map,
    tensor,
    tensor_power,
    unitary_automorphism,
    whitney_map,
    zero_map,
)
from .hermitian import (
    HermitianForm,
    ProperResult,
    Signature,
    TAU_DIV,
    TAU_SIG,
    automorphism_tensor_form,
    automorphism_tensor_rho_expansion,
    form_of,
    gram_form,
    hermitian_rank,
    image_rank,
    is_proper,
    norm_power_form,
    quotient_by_sphere,
    signature,
    sphere_form,
)
from .invariance import (
    BlockPartition,
    CapabilityError,
    GroupClosureError,
    GroupReport,
    MembershipResult,
    StrictStabilizer,
    TorusSubgroup,
    block_partition,
    diagonal_stabilizer,
    emit_invariance_system,
    origin_move_residual,
    evaluate_invariance_system,
    full_unitary_test,
    group_closure,
    group_report,
    membership,
    permutation_stabilizer,
    power_chain_check,
    source_rank_upper,
    strict_stabilizer,
    torus_test,
)
from .realize import (
    FactorizationResult,
    PadResult,
    RealizationError,
    close_permutation_group,
    factor_form,
    pad_to_proper,
    padded_map,
    realize_from_invariants,
    realize_subgroup,
    symmetric_group_map,
    symmetric_group_map_v2,
)
from .analysis import AnalysisBundle, SphereSampleResult, analyze_map, sphere_sample_check

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
