"""Python surface of the toolforge C++ core.

The heavy lifting (hub modeling, BM25/NDCG retrieval, ReACT/DFSDT search,
pass/win evaluation) lives in the compiled ``_core`` module; this package
re-exports the main operations.
"""

from ._core import (
    build_index,
    compress_response,
    count_tokens,
    judge_pass_rules,
    ndcg_at_k,
    oracle_search,
    parse_action,
    parse_tool_doc,
    pass_rate,
    render_function_schemas,
    run_search,
    win_rate,
    Index,
)

__all__ = [
    "build_index",
    "compress_response",
    "count_tokens",
    "judge_pass_rules",
    "ndcg_at_k",
    "oracle_search",
    "parse_action",
    "parse_tool_doc",
    "pass_rate",
    "render_function_schemas",
    "run_search",
    "win_rate",
    "Index",
]
