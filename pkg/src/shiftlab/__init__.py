"""Certified multiplicity bounds for joint invariant subspaces of tensorized shifts.

The package builds finite truncations of classical weighted-shift models
(Hardy, Bergman, Dirichlet, one-parameter weighted Bergman, polynomial
quotient models), tensors them into doubly commuting operator tuples,
constructs the joint invariant subspace S = (Q_1 (x) ... (x) Q_n)-perp with
its nested chain S >= F_1 >= ... >= F, and certifies the minimal number of
generators (the multiplicity) of the associated compressions with matching
lower and upper bounds.
"""

from .errors import (
    ConfigError,
    ContainmentError,
    EigenError,
    InputError,
    InternalConsistencyError,
    ModelError,
    ShiftlabError,
)
from .models import (
    QuotientModel,
    ShiftModel,
    SpaceKind,
    dump_matrix,
    ideal_subspace,
    kernel_vector,
    load_matrix,
    make_quotient,
    make_shift,
    matrix_from_json,
    matrix_to_json,
    prefix_coinvariant,
    shift_weights,
)
from .multiplicity import (
    MultiplicityResult,
    OperatorTuple,
    default_lambda_samples,
    has_gws,
    krylov_closure,
    local_corank,
    mult_upper,
    multiplicity,
    semi_invariant_bound_check,
    shifted_closure_check,
    wandering_subspace,
)
from .scenarios import (
    ALL_CHECKS,
    Report,
    Scenario,
    load_scenario,
    report_to_text,
    run_scenario,
    run_scenario_file,
    scenario_from_json,
)
from .subspaces import (
    DEFAULT_TOL,
    Subspace,
    complement_within,
    compress,
    image,
    max_principal_angle,
    opnorm,
    orthonormalize,
    principal_angles,
    project,
    same_subspace,
    sum_subspaces,
)
from .tensorized import (
    ChainDecomposition,
    StructureReport,
    TensorFactor,
    TensorSystem,
    WanderingDecomposition,
    build_system,
    coinvariant_eigenpairs,
    f_chain,
    joint_invariant_S,
    tensor_factor,
    verify_compression_structure,
    wandering_E,
    x_projections,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_CHECKS",
    "ChainDecomposition",
    "ConfigError",
    "ContainmentError",
    "DEFAULT_TOL",
    "EigenError",
    "InputError",
    "InternalConsistencyError",
    "ModelError",
    "MultiplicityResult",
    "OperatorTuple",
    "QuotientModel",
    "Report",
    "Scenario",
    "ShiftModel",
    "ShiftlabError",
    "SpaceKind",
    "StructureReport",
    "Subspace",
    "TensorFactor",
    "TensorSystem",
    "WanderingDecomposition",
    "build_system",
    "coinvariant_eigenpairs",
    "complement_within",
    "compress",
    "default_lambda_samples",
    "dump_matrix",
    "f_chain",
    "has_gws",
    "ideal_subspace",
    "image",
    "joint_invariant_S",
    "kernel_vector",
    "krylov_closure",
    "load_matrix",
    "load_scenario",
    "local_corank",
    "make_quotient",
    "make_shift",
    "matrix_from_json",
    "matrix_to_json",
    "max_principal_angle",
    "mult_upper",
    "multiplicity",
    "opnorm",
    "orthonormalize",
    "prefix_coinvariant",
    "principal_angles",
    "project",
    "report_to_text",
    "run_scenario",
    "run_scenario_file",
    "same_subspace",
    "scenario_from_json",
    "semi_invariant_bound_check",
    "shift_weights",
    "shifted_closure_check",
    "sum_subspaces",
    "tensor_factor",
    "verify_compression_structure",
    "wandering_E",
    "wandering_subspace",
    "x_projections",
]
