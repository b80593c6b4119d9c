"""Deterministic ranking engine for clarification questions."""

from ._core import (
    ClarirankError,
    Document,
    DocumentSet,
    InvertedIndex,
    QueryRecord,
    QuerySet,
    Ranking,
    ScoredDoc,
    WeightedQuery,
    __version__,
    cli_main,
    cosine_similarity,
    evaluate,
    expand_bo1,
    expand_external,
    expand_kl,
    expand_rm3,
    grid_search_bm25,
    load_documents,
    load_qrels,
    load_queries,
    make_weighted_query,
    mrr_at_k,
    preprocess,
    rank,
    read_run,
    score,
    write_run,
)

__all__ = [
    "ClarirankError",
    "Document",
    "DocumentSet",
    "InvertedIndex",
    "QueryRecord",
    "QuerySet",
    "Ranking",
    "ScoredDoc",
    "WeightedQuery",
    "__version__",
    "cli_main",
    "cosine_similarity",
    "evaluate",
    "expand_bo1",
    "expand_external",
    "expand_kl",
    "expand_rm3",
    "grid_search_bm25",
    "load_documents",
    "load_qrels",
    "load_queries",
    "make_weighted_query",
    "mrr_at_k",
    "preprocess",
    "rank",
    "read_run",
    "score",
    "write_run",
]
