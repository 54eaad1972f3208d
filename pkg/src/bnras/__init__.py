"""Belief-network inference at desk scale: a randomized approximation
sampler with a-priori convergence bounds, the straight-simulation baseline,
and an exact enumeration oracle to score them against.
"""

from .bounds import (
    BoundsReport,
    ErrorTolerances,
    factored_lower_bounds,
    mixing_bound,
    report_bounds,
    transitions_per_trial,
    trials_bound,
)
from .chain import (
    ChainState,
    do_transition,
    full_conditional,
    init_random_state,
    next_trial,
    straight_step,
)
from .errors import (
    BnrasError,
    CapacityError,
    CycleError,
    DeterministicConflictError,
    ImpossibleEvidenceError,
    MixingOverflowError,
    NetworkFormatError,
    NetworkValidationError,
    PositivityError,
)
from .estimate import (
    Checkpoint,
    ErrorReport,
    PosteriorEstimate,
    bnras_estimate,
    check_interval,
    error_metrics,
    rank_outcomes,
    straight_estimate,
)
from .exact import (
    DEFAULT_ENUM_CAP,
    DEFAULT_MATRIX_CAP,
    MixingReport,
    PosteriorTable,
    TransitionMatrix,
    build_transition_matrix,
    enumerate_posteriors,
    min_joint_posterior,
    min_transition_probability,
    mixing_report,
    relative_pointwise_distance,
)
from .model_io import (
    Diagnostic,
    NetworkDocument,
    builtin_networks,
    format_evidence,
    parse_document,
    parse_evidence,
    parse_network,
    serialize_network,
)
from .network import (
    BeliefNetwork,
    Cpt,
    Evidence,
    Node,
    ValidationReport,
    check_evidence,
    check_state,
    conditional_probability,
    free_nodes,
    joint_probability,
    markov_blanket,
    normalize_rows,
    topological_order,
    validate_network,
)
from .rng import RandomStream, derive_stream_seed

__version__ = "0.1.0"

__all__ = [
    "BeliefNetwork",
    "BnrasError",
    "BoundsReport",
    "CapacityError",
    "ChainState",
    "Checkpoint",
    "Cpt",
    "CycleError",
    "DEFAULT_ENUM_CAP",
    "DEFAULT_MATRIX_CAP",
    "DeterministicConflictError",
    "Diagnostic",
    "ErrorReport",
    "ErrorTolerances",
    "Evidence",
    "ImpossibleEvidenceError",
    "MixingOverflowError",
    "MixingReport",
    "NetworkDocument",
    "NetworkFormatError",
    "NetworkValidationError",
    "Node",
    "PositivityError",
    "PosteriorEstimate",
    "PosteriorTable",
    "RandomStream",
    "TransitionMatrix",
    "ValidationReport",
    "bnras_estimate",
    "build_transition_matrix",
    "builtin_networks",
    "check_evidence",
    "check_interval",
    "check_state",
    "conditional_probability",
    "derive_stream_seed",
    "do_transition",
    "enumerate_posteriors",
    "error_metrics",
    "factored_lower_bounds",
    "format_evidence",
    "free_nodes",
    "full_conditional",
    "init_random_state",
    "joint_probability",
    "markov_blanket",
    "min_joint_posterior",
    "min_transition_probability",
    "mixing_bound",
    "mixing_report",
    "next_trial",
    "normalize_rows",
    "parse_document",
    "parse_evidence",
    "parse_network",
    "rank_outcomes",
    "relative_pointwise_distance",
    "report_bounds",
    "serialize_network",
    "straight_estimate",
    "straight_step",
    "topological_order",
    "transitions_per_trial",
    "trials_bound",
    "validate_network",
]
