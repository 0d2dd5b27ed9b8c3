"""Atomic relevance scoring: (text, condition) -> [0, 1].

Three interchangeable scorers drive query evaluation:

* lexical: deterministic token-overlap coverage, no external services;
  the default for tests and offline use.
* embedding: cosine similarity between embeddings fetched from an
  external embedding service, clamped into [0, 1].
* entailment: probability that the text entails the condition, from an
  external NLI service.

The two remote scorers speak a small JSON-over-HTTP contract (see
README) and cache results per input, so repeated sub-scores inside one
query evaluation cost one round trip.
"""

from __future__ import annotations

import os
import re
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Union

import httpx
import numpy as np

from .errors import ScorerError, ServiceResponseError, TransportError
from .memtree import MemoryTree
from .query import AttributeTarget, WholeNode

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

ENV_EMBED_URL = "SXQ_EMBED_URL"
ENV_NLI_URL = "SXQ_NLI_URL"
ENV_MODEL = "SXQ_MODEL"

_DEFAULT_CACHE = 1024


@dataclass(frozen=True)
class ScorerSpec:
    """Which scorer to use and how to reach it.

    endpoint and model_name are required for the remote kinds and must be
    absent-or-ignored for the lexical scorer.
    """

    kind: str = "lexical"
    endpoint: Optional[str] = None
    model_name: Optional[str] = None
    cache_capacity: int = _DEFAULT_CACHE

    def __post_init__(self):
        if self.kind not in ("lexical", "embedding", "entailment"):
            raise ValueError(f"unknown scorer kind {self.kind!r}")
        if self.kind != "lexical" and (not self.endpoint or not self.model_name):
            raise ValueError(f"{self.kind} scorer needs an endpoint and a model name")
        if self.cache_capacity < 0:
            raise ValueError("cache capacity must be >= 0")


def spec_from_env(kind: str, cache_capacity: int = _DEFAULT_CACHE) -> ScorerSpec:
    """Build a ScorerSpec for kind using the SXQ_* environment variables."""
    if kind == "lexical":
        return ScorerSpec(kind="lexical", cache_capacity=cache_capacity)
    env = ENV_EMBED_URL if kind == "embedding" else ENV_NLI_URL
    return ScorerSpec(
        kind=kind,
        endpoint=os.environ.get(env),
        model_name=os.environ.get(ENV_MODEL),
        cache_capacity=cache_capacity,
    )


def tokenize(text: str) -> list[str]:
    """Case-folded maximal runs of letters/digits."""
    return _WORD_RE.findall(text.casefold())


def lexical_score(text: str, condition: str) -> float:
    """Fraction of the condition's distinct tokens present in the text."""
    wanted = set(tokenize(condition))
    if not wanted:
        return 0.0
    return len(wanted & set(tokenize(text))) / len(wanted)


class _LruCache:
    """Small thread-safe LRU; capacity 0 disables caching entirely."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        if self.capacity == 0:
            return None
        with self._lock:
            if key not in self._data:
                return None
            self._data.move_to_end(key)
            return self._data[key]

    def put(self, key, value):
        if self.capacity == 0:
            return
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.capacity:
                self._data.popitem(last=False)


class LexicalScorer:
    spec = ScorerSpec(kind="lexical")

    def score(self, text: str, condition: str) -> float:
        return lexical_score(text, condition)


class EmbeddingScorer:
    """Cosine-similarity scorer backed by an external embedding service."""

    def __init__(self, spec: ScorerSpec, client: Optional[httpx.Client] = None):
        if spec.kind != "embedding":
            raise ValueError("EmbeddingScorer needs an embedding ScorerSpec")
        self.spec = spec
        self._client = client or httpx.Client(timeout=30.0)
        self._cache = _LruCache(spec.cache_capacity)

    def _fetch(self, texts: list[str]) -> list[np.ndarray]:
        try:
            response = self._client.post(
                self.spec.endpoint, json={"model": self.spec.model_name, "input": texts}
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"embedding service unreachable: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(f"embedding service returned HTTP {response.status_code}: {response.text[:200]}")
        try:
            payload = response.json()
            vectors = payload["embeddings"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ServiceResponseError(f"malformed embedding response: {exc}") from exc
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ServiceResponseError("embedding response length does not match the request")
        out = []
        for vec in vectors:
            arr = np.asarray(vec, dtype=float)
            if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
                raise ServiceResponseError("embedding response contains a non-vector entry")
            out.append(arr)
        return out

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        out: dict[int, np.ndarray] = {}
        missing: list[tuple[int, str]] = []
        for i, text in enumerate(texts):
            hit = self._cache.get((self.spec.model_name, text))
            if hit is None:
                missing.append((i, text))
            else:
                out[i] = hit
        if missing:
            fetched = self._fetch([t for _, t in missing])
            for (i, text), vec in zip(missing, fetched):
                self._cache.put((self.spec.model_name, text), vec)
                out[i] = vec
        return [out[i] for i in range(len(texts))]

    def score(self, text: str, condition: str) -> float:
        a, b = self.embed([text, condition])
        if a.shape != b.shape:
            raise ServiceResponseError(f"embedding dimension mismatch: {a.shape} vs {b.shape}")
        denom = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
        if denom == 0.0:
            return 0.0
        cosine = float(np.dot(a, b)) / denom
        return min(1.0, max(0.0, cosine))


class EntailmentScorer:
    """NLI scorer: probability that text (premise) entails condition (hypothesis)."""

    def __init__(self, spec: ScorerSpec, client: Optional[httpx.Client] = None):
        if spec.kind != "entailment":
            raise ValueError("EntailmentScorer needs an entailment ScorerSpec")
        self.spec = spec
        self._client = client or httpx.Client(timeout=30.0)
        self._cache = _LruCache(spec.cache_capacity)

    def score(self, text: str, condition: str) -> float:
        key = (self.spec.model_name, text, condition)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        try:
            response = self._client.post(
                self.spec.endpoint,
                json={"model": self.spec.model_name, "premise": text, "hypothesis": condition},
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"NLI service unreachable: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(f"NLI service returned HTTP {response.status_code}: {response.text[:200]}")
        try:
            payload = response.json()
            value = payload["entailment"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ServiceResponseError(f"malformed NLI response: {exc}") from exc
        if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
            raise ServiceResponseError(f"entailment probability out of range: {value!r}")
        result = float(value)
        self._cache.put(key, result)
        return result


Scorer = Union[LexicalScorer, EmbeddingScorer, EntailmentScorer]


def make_scorer(spec: ScorerSpec) -> Scorer:
    if spec.kind == "lexical":
        return LexicalScorer()
    if spec.kind == "embedding":
        return EmbeddingScorer(spec)
    return EntailmentScorer(spec)


def as_scorer(scorer_or_spec) -> Scorer:
    """Accept either a ScorerSpec or a ready scorer instance."""
    if isinstance(scorer_or_spec, ScorerSpec):
        return make_scorer(scorer_or_spec)
    return scorer_or_spec


def embedding_score(text: str, condition: str, spec: ScorerSpec) -> float:
    return EmbeddingScorer(spec).score(text, condition)


def entailment_score(text: str, condition: str, spec: ScorerSpec) -> float:
    return EntailmentScorer(spec).score(text, condition)


def atom(scorer: Scorer, tree: MemoryTree, node_id: str,
         target: Union[AttributeTarget, WholeNode], condition: str) -> float:
    """Score one node against a condition, on an attribute or the whole node.

    A missing attribute scores 0 rather than raising: queries stay usable
    over heterogeneous nodes.
    """
    if isinstance(target, WholeNode):
        text = tree.node_text(node_id)
    else:
        value = tree.node(node_id).attributes.get(target.name)
        if value is None:
            return 0.0
        text = value
    score = scorer.score(text, condition)
    if not 0.0 <= score <= 1.0:
        raise ScorerError(f"scorer produced out-of-range value {score!r}")
    return score
