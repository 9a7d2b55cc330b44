"""Sequential projective measurements in finite dimension.

Measurements are projector-valued questions with a unitary disturbance;
the package evaluates repeatability conditions, quantifies question-order
effects, verifies the structural consequences on random instances, and
searches for extremal pairs under constraint.
"""

from .criteria import (
    ConditionCheck,
    CriteriaReport,
    FullRepeatabilityCertificate,
    GramCheck,
    StructuralReport,
    aba_repeatability,
    adjacent_repeatability,
    bab_repeatability,
    certain_state_is_fixed,
    criteria_report,
    full_repeatability_certificate,
    order_effect_magnitude,
    order_effect_operator,
    structural_consequences,
    transformer_gram_check,
)
from .exceptions import (
    BadParameterLengthError,
    DimensionMismatchError,
    NotHermitianError,
    NotNestedError,
    NotPerpendicularError,
    NotProjectorError,
    NotProjectorGramError,
    NotSkewHermitianError,
    NotUnitaryError,
    PreconditionUnmetError,
    RankOutOfRangeError,
    ToolkitError,
    ZeroBranchError,
)
from .instances import (
    ShiftInstance,
    absorption_residual,
    example_pair,
    example_pair_theta,
    interior_absorption_residual,
    random_aba_pair,
    random_fully_repeatable_pair,
    random_projector,
    random_unitary,
    random_unitary_preserving,
    truncated_shift,
)
from .kernels import BACKEND, expm_skew, pair_stats
from .linalg import (
    DEFAULT_TOL,
    BlockDecomposition,
    Subspace,
    SubspaceDecomposition,
    Tolerances,
    block_decompose,
    four_way_decomposition,
    hermitian_eig,
    is_effect,
    is_hermitian,
    is_projector,
    is_unitary,
    relative_complement,
    subspace_intersection,
    svd_decompose,
    unitary_from_skew,
)
from .measurement import (
    BranchResult,
    InstancePair,
    Measurement,
    apply_transformer,
    conditional_final_prob,
    extract_unitary_factor,
    pair_from_json,
    pair_to_json,
    sequence_joint_prob,
    validate_measurement,
    validate_pair,
)
from .search import (
    CONSTRAINT_TOKENS,
    FEAS_TOL,
    FeasibilityReport,
    SearchProblem,
    SearchResult,
    TraceEntry,
    default_projectors,
    feasibility_report,
    optimize,
    parameter_count,
    parametrize,
    penalized_objective,
    problem_to_json,
    result_to_json,
    trace_to_csv,
)
from .verify import SuiteResult, run_all

__version__ = "1.0.0"

__all__ = [
    "BACKEND",
    "BadParameterLengthError",
    "BlockDecomposition",
    "BranchResult",
    "CONSTRAINT_TOKENS",
    "ConditionCheck",
    "CriteriaReport",
    "DEFAULT_TOL",
    "DimensionMismatchError",
    "FEAS_TOL",
    "FeasibilityReport",
    "FullRepeatabilityCertificate",
    "GramCheck",
    "InstancePair",
    "Measurement",
    "NotHermitianError",
    "NotNestedError",
    "NotPerpendicularError",
    "NotProjectorError",
    "NotProjectorGramError",
    "NotSkewHermitianError",
    "NotUnitaryError",
    "PreconditionUnmetError",
    "RankOutOfRangeError",
    "SearchProblem",
    "SearchResult",
    "ShiftInstance",
    "StructuralReport",
    "Subspace",
    "SubspaceDecomposition",
    "SuiteResult",
    "Tolerances",
    "ToolkitError",
    "TraceEntry",
    "ZeroBranchError",
    "aba_repeatability",
    "absorption_residual",
    "adjacent_repeatability",
    "apply_transformer",
    "bab_repeatability",
    "block_decompose",
    "certain_state_is_fixed",
    "conditional_final_prob",
    "criteria_report",
    "default_projectors",
    "example_pair",
    "example_pair_theta",
    "expm_skew",
    "extract_unitary_factor",
    "feasibility_report",
    "four_way_decomposition",
    "full_repeatability_certificate",
    "hermitian_eig",
    "interior_absorption_residual",
    "is_effect",
    "is_hermitian",
    "is_projector",
    "is_unitary",
    "optimize",
    "order_effect_magnitude",
    "order_effect_operator",
    "pair_from_json",
    "pair_stats",
    "pair_to_json",
    "parameter_count",
    "parametrize",
    "penalized_objective",
    "problem_to_json",
    "random_aba_pair",
    "random_fully_repeatable_pair",
    "random_projector",
    "random_unitary",
    "random_unitary_preserving",
    "relative_complement",
    "result_to_json",
    "run_all",
    "sequence_joint_prob",
    "structural_consequences",
    "subspace_intersection",
    "svd_decompose",
    "trace_to_csv",
    "transformer_gram_check",
    "truncated_shift",
    "unitary_from_skew",
    "validate_measurement",
    "validate_pair",
]
