"""Gene Ontology annotation-evolution analysis and negative-example selection.

Thin Python layer over the C++ core. The heavy lifting (OBO/GAF parsing,
true-path-rule closure, similarity matrices, selection heuristics, the
temporal-holdout benchmark) happens in the `_core` extension module.
"""

from ._core import (
    EmptyResultError,
    GoDomainError,
    GoLookupError,
    Ontology,
    ParseError,
    Release,
    SimilarityMatrix,
    StructuralError,
    build_similarity_matrix,
    eligible_terms,
    jaccard_similarity,
    lin_similarity,
    load_gaf,
    load_obo,
    normalized_rank,
    normalized_rank_row,
    novelty,
    parse_gaf,
    parse_obo,
    quantile_threshold,
    rank_analysis,
    run_benchmark,
    select,
    term_frequency,
    tune_k,
    wilcoxon_signed_rank,
)

__all__ = [
    "EmptyResultError",
    "GoDomainError",
    "GoLookupError",
    "Ontology",
    "ParseError",
    "Release",
    "SimilarityMatrix",
    "StructuralError",
    "build_similarity_matrix",
    "eligible_terms",
    "jaccard_similarity",
    "lin_similarity",
    "load_gaf",
    "load_obo",
    "normalized_rank",
    "normalized_rank_row",
    "novelty",
    "parse_gaf",
    "parse_obo",
    "quantile_threshold",
    "rank_analysis",
    "run_benchmark",
    "select",
    "term_frequency",
    "tune_k",
    "wilcoxon_signed_rank",
]

__version__ = "0.1.0"
