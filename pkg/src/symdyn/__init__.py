"""Symbolic dynamics toolkit: subshift languages, SFT covers, entropy,
maximal-entropy measures, block codes and circle-rotation codings."""

from .blockcode import (
    BlockCode,
    ScreeningReport,
    apply_to_word,
    check_endomorphism,
    compose,
    find_inverse,
    preimage_words,
    screening_test,
)
from .charmeasure import CharMeasureEstimate, characteristic_estimate, entropy_bounds
from .graph import EmptyShift, SftGraph, build_graph
from .language import (
    ForbiddenList,
    FullShift,
    LanguageTable,
    Product,
    StabilityProfile,
    SubshiftSpec,
    complexity,
    distance,
    fibonacci_shift,
    language,
    minimal_forbidden,
    product,
    sft_cover,
    stability_profile,
    window_density,
)
from .quadratic import QuadraticIrrational, QuadraticPoint, parse_alpha, parse_point
from .rotation import (
    RotationCoding,
    beta_chain_search,
    cf_convergents,
    coding_language,
    gap_structure,
    mfw_witness_check,
    orbit_gap_visits,
    z_union_language,
)
from .sft import (
    MarkovMeasure,
    MeasureMixture,
    check_gluing,
    cylinder_measure,
    mme_mixture,
    parry_measure,
    topological_entropy,
    transitive_components,
    uniform_visit_refinement,
)
from .words import Alphabet

__all__ = [
    "Alphabet",
    "apply_to_word",
    "beta_chain_search",
    "BlockCode",
    "build_graph",
    "cf_convergents",
    "characteristic_estimate",
    "CharMeasureEstimate",
    "check_endomorphism",
    "check_gluing",
    "coding_language",
    "complexity",
    "compose",
    "cylinder_measure",
    "distance",
    "EmptyShift",
    "entropy_bounds",
    "fibonacci_shift",
    "find_inverse",
    "ForbiddenList",
    "FullShift",
    "gap_structure",
    "language",
    "LanguageTable",
    "MarkovMeasure",
    "MeasureMixture",
    "mfw_witness_check",
    "minimal_forbidden",
    "mme_mixture",
    "orbit_gap_visits",
    "parry_measure",
    "parse_alpha",
    "parse_point",
    "preimage_words",
    "product",
    "Product",
    "QuadraticIrrational",
    "QuadraticPoint",
    "RotationCoding",
    "screening_test",
    "ScreeningReport",
    "sft_cover",
    "SftGraph",
    "stability_profile",
    "StabilityProfile",
    "SubshiftSpec",
    "topological_entropy",
    "transitive_components",
    "uniform_visit_refinement",
    "window_density",
    "z_union_language",
]
