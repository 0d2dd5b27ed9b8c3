from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sxq.errors import ServiceResponseError, TransportError
from sxq.query import AttributeTarget, WholeNode
from sxq.replay import ReplayScorerServer
from sxq.scorers import (
    EmbeddingScorer,
    EntailmentScorer,
    ScorerSpec,
    atom,
    embedding_score,
    entailment_score,
    lexical_score,
    make_scorer,
    tokenize,
)


def test_lexical_examples():
    assert lexical_score("POI conference welcome reception", "conference") == 1.0
    assert lexical_score("POI beach walk", "conference") == 0.0
    assert lexical_score("Version delete poster session", "poster talk") == 0.5


def test_lexical_empty_condition_scores_zero():
    assert lexical_score("anything", "") == 0.0
    assert lexical_score("anything", "!!! ---") == 0.0


def test_tokenize_runs_of_letters_and_digits():
    assert tokenize("Day 2, 2026-08-03!") == ["day", "2", "2026", "08", "03"]
    assert tokenize("foo_bar") == ["foo", "bar"]


@given(st.text(max_size=60), st.text(max_size=60))
@settings(max_examples=300, deadline=None)
def test_lexical_range(text, condition):
    assert 0.0 <= lexical_score(text, condition) <= 1.0


@given(st.text(max_size=40), st.text(min_size=1, max_size=20))
@settings(max_examples=200, deadline=None)
def test_lexical_duplicate_condition_tokens_are_free(text, condition):
    assert lexical_score(text, condition) == lexical_score(text, condition + " " + condition)


@given(st.text(max_size=40), st.text(max_size=20))
@settings(max_examples=200, deadline=None)
def test_lexical_case_and_punctuation_invariance(text, condition):
    base = lexical_score(text, condition)
    assert lexical_score(text.upper(), condition.lower()) == base
    assert lexical_score(text.replace(",", "."), condition.replace(";", "!")) == base


def test_atom_examples(acl_tree, lexical):
    scorer = make_scorer(lexical)
    assert atom(scorer, acl_tree, "d3p1", AttributeTarget("title"), "workshop") == 1.0
    assert atom(scorer, acl_tree, "d3p1", AttributeTarget("missing"), "workshop") == 0.0
    assert atom(scorer, acl_tree, "d3p1", WholeNode(), "workshop") == 1.0


# -- embedding scorer ---------------------------------------------------------


def test_embedding_self_similarity(embed_spec):
    score = embedding_score("conference", "conference", embed_spec)
    assert score == pytest.approx(1.0, abs=1e-9)


def test_embedding_replay_scores(embed_spec, acl_tree):
    scorer = EmbeddingScorer(embed_spec)
    scores = [
        scorer.score(acl_tree.node_text(poi), "conference")
        for poi in ("d2p1", "d2p2", "d2p3")
    ]
    assert [round(s, 3) for s in scores] == [0.603, 0.482, 0.608]


def test_embedding_clamps_to_unit_interval():
    with ReplayScorerServer(embeddings={"kind": "embedding", "embeddings": {
        "a": [1.0, 0.0], "b": [0.0, 1.0], "c": [-1.0, 0.0],
    }}) as srv:
        spec = ScorerSpec(kind="embedding", endpoint=srv.url, model_name="m")
        scorer = EmbeddingScorer(spec)
        assert scorer.score("a", "b") == 0.0  # orthogonal
        assert scorer.score("a", "c") == 0.0  # negative cosine clamps to 0
        assert scorer.score("a", "a") == pytest.approx(1.0)


def test_embedding_dimension_mismatch():
    with ReplayScorerServer(embeddings={"kind": "embedding", "embeddings": {
        "a": [1.0, 0.0], "b": [0.0, 1.0, 0.0],
    }}) as srv:
        spec = ScorerSpec(kind="embedding", endpoint=srv.url, model_name="m")
        with pytest.raises(ServiceResponseError, match="dimension"):
            EmbeddingScorer(spec).score("a", "b")


def test_embedding_unknown_input_is_an_error_not_a_score(embed_spec):
    scorer = EmbeddingScorer(embed_spec)
    with pytest.raises(TransportError):
        scorer.score("text the replay has never seen", "conference")


def test_unreachable_endpoint_raises_transport_error():
    spec = ScorerSpec(kind="embedding", endpoint="http://127.0.0.1:9", model_name="m")
    with pytest.raises(TransportError):
        EmbeddingScorer(spec).score("a", "b")


def test_embedding_cache_is_semantically_invisible(replay_server):
    scores = {}
    for capacity in (0, 64):
        spec = ScorerSpec(kind="embedding", endpoint=replay_server.url,
                          model_name="replay-embed", cache_capacity=capacity)
        scorer = EmbeddingScorer(spec)
        scores[capacity] = [scorer.score("POI poster session 13:00", "conference") for _ in range(3)]
    assert scores[0] == scores[64]
    assert len(set(scores[64])) == 1


def test_embedding_cache_avoids_repeat_fetches(replay_server, monkeypatch):
    calls = []
    original = replay_server.handle

    def counting(body):
        calls.append(body)
        return original(body)

    monkeypatch.setattr(replay_server, "handle", counting)
    spec = ScorerSpec(kind="embedding", endpoint=replay_server.url,
                      model_name="replay-embed", cache_capacity=64)
    scorer = EmbeddingScorer(spec)
    for _ in range(4):
        scorer.score("conference", "conference")
    assert len(calls) == 1


# -- entailment scorer --------------------------------------------------------


def test_entailment_passthrough():
    with ReplayScorerServer(nli={"kind": "nli", "pairs": [
        {"premise": "p", "hypothesis": "h", "entailment": 0.9, "neutral": 0.05, "contradiction": 0.05},
        {"premise": "p0", "hypothesis": "h", "entailment": 0.0, "neutral": 0.6, "contradiction": 0.4},
    ]}) as srv:
        spec = ScorerSpec(kind="entailment", endpoint=srv.url, model_name="m")
        assert entailment_score("p", "h", spec) == 0.9
        assert entailment_score("p0", "h", spec) == 0.0


def test_entailment_malformed_responses():
    with ReplayScorerServer(nli={"kind": "nli", "pairs": [
        {"premise": "p", "hypothesis": "h", "entailment": 1.7},
    ]}) as srv:
        spec = ScorerSpec(kind="entailment", endpoint=srv.url, model_name="m")
        with pytest.raises(ServiceResponseError):
            EntailmentScorer(spec).score("p", "h")


def test_entailment_unreachable_endpoint():
    spec = ScorerSpec(kind="entailment", endpoint="http://127.0.0.1:9", model_name="m")
    with pytest.raises(TransportError):
        EntailmentScorer(spec).score("p", "h")


def test_entailment_fixture_scores(nli_spec, acl_tree):
    scorer = EntailmentScorer(nli_spec)
    assert scorer.score(acl_tree.node_text("d2p1"), "conference") == 0.91


# -- spec validation ----------------------------------------------------------


def test_scorer_spec_validation():
    with pytest.raises(ValueError):
        ScorerSpec(kind="embedding")  # endpoint/model required
    with pytest.raises(ValueError):
        ScorerSpec(kind="psychic")
    with pytest.raises(ValueError):
        ScorerSpec(cache_capacity=-1)
    assert ScorerSpec().kind == "lexical"
