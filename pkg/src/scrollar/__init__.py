"""Scrollar invariants of ruling covers cut from nodal curves on
Hirzebruch surfaces, cross-validated by an exact prime-field rank
oracle, with splitting-type combinatorics, polytope membership and
existence-bound predicates."""

from .errors import DisagreementError, InconsistentModelError, ResourceCapError
from .interpolation import (
    ConditionsReport,
    Method,
    NodeConfiguration,
    NodeKind,
    build_evaluation_matrix,
    conditions_closed_form,
    conditions_general_points,
    conditions_on_sections_mincut,
    conditions_on_sections_sigma,
    oracle_conditions,
    section_capacities,
    star_condition,
)
from .invariants import (
    ClosedFormHypothesisWarning,
    CoverProblem,
    DeficitLevel,
    ScrollarVector,
    SectionsClosedForm,
    SplittingVector,
    check_scrollar_sum,
    directrix_splitting,
    expected_balanced,
    genus_of,
    scan_value,
    scrollar_chain_closed_form,
    scrollar_generic_closed_form,
    scrollar_scan,
    scrollar_scan_oracle,
    scrollar_sections_closed_form,
    sections_closed_form_trace,
    trivial_pushforward_splitting,
)
from .modp import (
    DEFAULT_PRIME,
    PrimeField,
    PrimeFieldMatrix,
    SeededRng,
    derive_seed,
    is_prime,
    rank,
    sample_distinct,
)
from .splitting import (
    FeasibilityReport,
    PolytopeReport,
    SplittingPair,
    end_h1,
    existence_guaranteed_gap,
    existence_guaranteed_sections,
    hom_h1,
    no_fixed_component_bound,
    polytope_membership,
    pushforward_h1_identity,
    splitting_locus_dimension,
    splitting_pair_feasible,
    splitting_report,
)
from .surface import (
    DivisorClass,
    Surface,
    arithmetic_genus,
    canonical_class,
    directrix,
    h0_line_bundle,
    intersect,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedFormHypothesisWarning",
    "ConditionsReport",
    "CoverProblem",
    "DEFAULT_PRIME",
    "DeficitLevel",
    "DisagreementError",
    "DivisorClass",
    "FeasibilityReport",
    "InconsistentModelError",
    "Method",
    "NodeConfiguration",
    "NodeKind",
    "PolytopeReport",
    "PrimeField",
    "PrimeFieldMatrix",
    "ResourceCapError",
    "ScrollarVector",
    "SectionsClosedForm",
    "SeededRng",
    "SplittingPair",
    "SplittingVector",
    "Surface",
    "arithmetic_genus",
    "build_evaluation_matrix",
    "canonical_class",
    "check_scrollar_sum",
    "conditions_closed_form",
    "conditions_general_points",
    "conditions_on_sections_mincut",
    "conditions_on_sections_sigma",
    "derive_seed",
    "directrix",
    "directrix_splitting",
    "end_h1",
    "existence_guaranteed_gap",
    "existence_guaranteed_sections",
    "expected_balanced",
    "genus_of",
    "h0_line_bundle",
    "hom_h1",
    "intersect",
    "is_prime",
    "no_fixed_component_bound",
    "oracle_conditions",
    "polytope_membership",
    "pushforward_h1_identity",
    "rank",
    "sample_distinct",
    "scan_value",
    "scrollar_chain_closed_form",
    "scrollar_generic_closed_form",
    "scrollar_scan",
    "scrollar_scan_oracle",
    "scrollar_sections_closed_form",
    "section_capacities",
    "sections_closed_form_trace",
    "splitting_locus_dimension",
    "splitting_pair_feasible",
    "splitting_report",
    "star_condition",
    "trivial_pushforward_splitting",
]
