"""Exact polynomial algebra for graphical-model constraints and selection."""

__version__ = "0.1.0"

from .polyring import (
    MonomialOrder,
    PolyRing,
    Polynomial,
    RationalFunction,
    mono_compare,
    normal_form,
    poly_divide,
)
from .groebner import (
    Budget,
    BudgetExceededError,
    GroebnerBasis,
    Ideal,
    buchberger,
    eliminate,
    ideal_member,
    s_polynomial,
)
from .netmodels import (
    BayesNet,
    ConstraintSet,
    GaussianNet,
    ParamMap,
    build_map,
    ci_constraints,
    conditional_space_map,
    gaussian_covariance_map,
    gaussian_precision_map,
    joint_space_map,
    local_structure_map,
    log_odds_linearize,
    parse_model,
)
from .implicitize import (
    build_relation_ideal,
    implicitize_model,
    numeric_validate,
    symbolic_residual,
)
from .geometry import (
    RankProfile,
    generic_rank,
    jacobian,
    model_dimension,
    singular_scan,
)
from .select import (
    Dataset,
    ModelEntry,
    bic_score,
    compare_models,
    constraint_test,
    em_fit,
    mle_observed,
    sample_discrete,
    sample_gaussian,
)

__all__ = [
    "MonomialOrder",
    "PolyRing",
    "Polynomial",
    "RationalFunction",
    "mono_compare",
    "normal_form",
    "poly_divide",
    "Budget",
    "BudgetExceededError",
    "GroebnerBasis",
    "Ideal",
    "buchberger",
    "eliminate",
    "ideal_member",
    "s_polynomial",
    "BayesNet",
    "ConstraintSet",
    "GaussianNet",
    "ParamMap",
    "build_map",
    "ci_constraints",
    "conditional_space_map",
    "gaussian_covariance_map",
    "gaussian_precision_map",
    "joint_space_map",
    "local_structure_map",
    "log_odds_linearize",
    "parse_model",
    "build_relation_ideal",
    "implicitize_model",
    "numeric_validate",
    "symbolic_residual",
    "RankProfile",
    "generic_rank",
    "jacobian",
    "model_dimension",
    "singular_scan",
    "Dataset",
    "ModelEntry",
    "bic_score",
    "compare_models",
    "constraint_test",
    "em_fit",
    "mle_observed",
    "sample_discrete",
    "sample_gaussian",
]
