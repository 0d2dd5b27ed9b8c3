"""Query-response assembly shared by the CLI and the HTTP service.

Both surfaces must produce byte-identical response bodies for identical
inputs, so the whole shape is built here and serialized with one dump
policy.
"""

from __future__ import annotations

import json
import os

from .executor import evaluate, rank, trace_to_json
from .memtree import MemoryTree
from .query import parse
from .scorers import ENV_EMBED_URL, ENV_MODEL, ENV_NLI_URL, ScorerSpec


def scorer_spec_from_json(obj: dict | None) -> ScorerSpec:
    """Decode {"kind", "endpoint"?, "model"?, "cacheCapacity"?}; endpoint
    and model fall back to the SXQ_* environment variables."""
    obj = obj or {}
    kind = obj.get("kind", "lexical")
    if kind == "lexical":
        return ScorerSpec(cache_capacity=obj.get("cacheCapacity", 1024))
    env_endpoint = os.environ.get(ENV_EMBED_URL if kind == "embedding" else ENV_NLI_URL)
    return ScorerSpec(
        kind=kind,
        endpoint=obj.get("endpoint") or env_endpoint,
        model_name=obj.get("model") or os.environ.get(ENV_MODEL),
        cache_capacity=obj.get("cacheCapacity", 1024),
    )


def build_query_response(tree: MemoryTree, query_text: str, scorer, top_k: int,
                         include_trace: bool) -> dict:
    """Evaluate a query and shape the full response: ranked results with
    root-to-node paths, the top match's subtree rendering, its token
    count, and optionally the execution trace."""
    if top_k < 1:
        raise ValueError("topK must be >= 1")
    query = parse(query_text)
    weighted, trace = evaluate(tree, query, scorer)
    ranked = rank(weighted)
    results = [
        {"id": nid, "weight": weight, "path": tree.path_to(nid)}
        for nid, weight in ranked.entries[:top_k]
    ]
    response = {
        "query": query_text,
        "results": results,
        "topId": ranked.top_id,
        "topSubtree": None,
        "contextTokenCount": 0,
    }
    if ranked.top_id is not None:
        rendering = tree.serialize_subtree(ranked.top_id)
        response["topSubtree"] = {"text": rendering.text, "tokenCount": rendering.token_count}
        response["contextTokenCount"] = rendering.token_count
    if include_trace:
        response["trace"] = trace_to_json(trace)
    return response


def dump_response(response: dict) -> str:
    """The one serialization policy for response bodies."""
    return json.dumps(response, ensure_ascii=False, indent=2, sort_keys=False)
