"""Exact convex spaces: axioms, derived n-ary combinations, linear embedding, norm recovery."""

__version__ = "0.1.0"

from .distributions import (
    Permutation,
    ProbDist,
    dyadic_thirds_grid,
    l1_distance,
    merge_first_two,
    drop_last,
    permute,
    product_split,
)
from .models import HullModel, MetricKind, SemilatticeModel, TableModel, cc, gamma, metric, nu_assoc
from .harness import (
    CancellationWitness,
    CheckReport,
    Sampler,
    Witness,
    cancellation_propagation,
    cancellation_search,
    check_convex_space_axioms,
    check_first_metric_condition,
    check_gamma_axioms,
    check_metric_axiom,
    lambda_sequence,
    replay,
)
from .embedding import build_relations, embed, generate_carrier, quotient_coordinates, verify_embedding
from .norms import (
    NormProbe,
    TranslationQuad,
    boundedness_check,
    check_translation_invariance,
    check_uniform_on_lines,
    recover_norm,
    verify_isometry,
)

__all__ = [
    "__version__",
    "Permutation",
    "ProbDist",
    "dyadic_thirds_grid",
    "l1_distance",
    "merge_first_two",
    "drop_last",
    "permute",
    "product_split",
    "HullModel",
    "MetricKind",
    "SemilatticeModel",
    "TableModel",
    "cc",
    "gamma",
    "metric",
    "nu_assoc",
    "CancellationWitness",
    "CheckReport",
    "Sampler",
    "Witness",
    "cancellation_propagation",
    "cancellation_search",
    "check_convex_space_axioms",
    "check_first_metric_condition",
    "check_gamma_axioms",
    "check_metric_axiom",
    "lambda_sequence",
    "replay",
    "build_relations",
    "embed",
    "generate_carrier",
    "quotient_coordinates",
    "verify_embedding",
    "NormProbe",
    "TranslationQuad",
    "boundedness_check",
    "check_translation_invariance",
    "check_uniform_on_lines",
    "recover_norm",
    "verify_isometry",
]
