"""Exact engines for derivations, local derivations, automorphisms and
local automorphisms of structure-constant algebras, with a numeric
exponential bridge between the infinitesimal and global pictures."""

from .algebra import (
    Algebra,
    PowerFiltration,
    builtin,
    characteristic_sequence,
    get_algebra,
    is_associative,
    left_mult_operator,
    load_algebra,
    multiplicativity_residual,
    power_filtration,
    save_algebra,
    zero_algebra,
)
from .automorphisms import (
    AutomorphismFamily,
    FamilyReport,
    automorphism_family,
    group_closure_report,
    is_automorphism,
    preserves_filtration,
    random_member,
    verify_family,
)
from .derivations import (
    DerivationSpace,
    bracket,
    bracket_closed,
    derivation_algebra,
    is_derivation,
)
from .errors import (
    InputError,
    InternalCheckError,
    LocsymError,
    NumericsError,
    StratificationError,
    UnsupportedError,
)
from .expbridge import (
    BridgeReport,
    bridge_check,
    closed_form,
    eval_series,
    matrix_exp,
    matrix_log,
    minus_branch_log_attempt,
    series_coefficients,
    series_tail_bound,
    structured_log_pi3,
)
from .geometry import GeometryReport, branch_disjointness, geometry_report
from .inference import (
    ShapePrediction,
    ValidationReport,
    infer_shape,
    validate_prediction,
)
from .linalg import (
    Matrix,
    Subspace,
    load_operator,
    save_operator,
)
from .local_automorphisms import (
    FeasibilityReport,
    LocAutPattern,
    PatternCheck,
    PatternReport,
    find_witness,
    group_closure_check,
    locaut_feasible_at,
    locaut_pattern,
    pattern_check,
    pattern_residual,
    random_pattern_member,
    verify_pattern,
)
from .local_derivations import (
    LocalDerivationSpace,
    local_derivation_space,
    pointwise_membership,
    strict_inclusion_witness,
    verify_pointwise_everywhere,
)
from .stratify import CaseTree, ParametricSystem, StratumCase, solve_parametric
from .templates import (
    MatrixTemplate,
    builtin_form,
    load_template,
    save_template,
    template_match,
    template_space_equals,
)
from .acceptance import CriterionResult, SuiteResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AutomorphismFamily",
    "BridgeReport",
    "CaseTree",
    "CriterionResult",
    "DerivationSpace",
    "FamilyReport",
    "FeasibilityReport",
    "GeometryReport",
    "InputError",
    "InternalCheckError",
    "LocAutPattern",
    "LocalDerivationSpace",
    "LocsymError",
    "Matrix",
    "MatrixTemplate",
    "NumericsError",
    "ParametricSystem",
    "PatternCheck",
    "PatternReport",
    "PowerFiltration",
    "ShapePrediction",
    "StratificationError",
    "StratumCase",
    "Subspace",
    "SuiteResult",
    "UnsupportedError",
    "ValidationReport",
    "automorphism_family",
    "bracket",
    "bracket_closed",
    "branch_disjointness",
    "bridge_check",
    "builtin",
    "builtin_form",
    "characteristic_sequence",
    "closed_form",
    "derivation_algebra",
    "eval_series",
    "find_witness",
    "geometry_report",
    "get_algebra",
    "group_closure_check",
    "group_closure_report",
    "infer_shape",
    "is_associative",
    "is_automorphism",
    "is_derivation",
    "left_mult_operator",
    "load_algebra",
    "load_operator",
    "load_template",
    "local_derivation_space",
    "locaut_feasible_at",
    "locaut_pattern",
    "matrix_exp",
    "matrix_log",
    "minus_branch_log_attempt",
    "multiplicativity_residual",
    "pattern_check",
    "pattern_residual",
    "pointwise_membership",
    "power_filtration",
    "preserves_filtration",
    "random_member",
    "random_pattern_member",
    "run_suite",
    "save_algebra",
    "save_operator",
    "save_template",
    "series_coefficients",
    "series_tail_bound",
    "solve_parametric",
    "strict_inclusion_witness",
    "structured_log_pi3",
    "template_match",
    "template_space_equals",
    "validate_prediction",
    "verify_family",
    "verify_pattern",
    "verify_pointwise_everywhere",
    "zero_algebra",
]
