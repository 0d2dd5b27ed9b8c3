from __future__ import annotations

import json
from pathlib import Path

import pytest

from sxq.memtree import MemoryTree, load_memory_file
from sxq.replay import ReplayScorerServer, load_replay
from sxq.scorers import ScorerSpec

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"
ACL_TRIP = FIXTURES / "acl_trip.json"
EMBED_REPLAY = FIXTURES / "scorer_replays" / "acl_trip_embeddings.json"
NLI_REPLAY = FIXTURES / "scorer_replays" / "nli_demo.json"
SESSION_10TURN = FIXTURES / "session_10turn.json"


@pytest.fixture
def acl_tree() -> MemoryTree:
    return load_memory_file(ACL_TRIP)


@pytest.fixture
def lexical() -> ScorerSpec:
    return ScorerSpec()


@pytest.fixture(scope="session")
def replay_server():
    server = ReplayScorerServer(
        embeddings=load_replay(EMBED_REPLAY), nli=load_replay(NLI_REPLAY)
    )
    with server:
        yield server


@pytest.fixture(scope="session")
def embed_spec(replay_server) -> ScorerSpec:
    return ScorerSpec(kind="embedding", endpoint=replay_server.url, model_name="replay-embed")


@pytest.fixture(scope="session")
def nli_spec(replay_server) -> ScorerSpec:
    return ScorerSpec(kind="entailment", endpoint=replay_server.url, model_name="replay-nli")


def load_json(path: Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
