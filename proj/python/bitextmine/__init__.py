"""Python bindings for the bitext mining library."""

from ._core import (
    Error,
    IvfPqIndex,
    classify_band,
    corpus_stats,
    cosine_similarity,
    exact_search,
    merge_page_fragments,
    normalize,
    read_semb,
    run_pipeline,
    segment_sentences,
    spearman,
    write_semb,
)

__all__ = [
    "Error",
    "IvfPqIndex",
    "classify_band",
    "corpus_stats",
    "cosine_similarity",
    "exact_search",
    "merge_page_fragments",
    "normalize",
    "read_semb",
    "run_pipeline",
    "segment_sentences",
    "spearman",
    "write_semb",
]
