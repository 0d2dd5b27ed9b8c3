from __future__ import annotations

import random

import pytest

from sxq.bench import SessionScriptError, Turn, parse_session, rows_to_csv, run_bench
from sxq.synthetic import planted_session

from conftest import SESSION_10TURN, load_json


def _column(rows, strategy, field="tokens"):
    return [row[field] for row in rows if row["strategy"] == strategy]


def test_ten_turn_session_shapes(acl_tree, lexical):
    turns = parse_session(load_json(SESSION_10TURN))
    assert len(turns) == 10
    rows, final_tree = run_bench(acl_tree, turns, scorer=lexical)
    in_context = _column(rows, "in-context")
    assert all(b > a for a, b in zip(in_context, in_context[1:]))
    sxq_tokens = _column(rows, "sxq")
    # the queried day-2 subtree is untouched by the script's edits
    assert len(set(sxq_tokens)) == 1
    assert len(final_tree.children(final_tree.root_id)) == 11  # one branch per turn


def test_bench_strategy_filter(acl_tree, lexical):
    turns = parse_session(load_json(SESSION_10TURN))[:2]
    rows, _ = run_bench(acl_tree, turns, strategies=("sxq",), scorer=lexical)
    assert {row["strategy"] for row in rows} == {"sxq"}


def test_bench_hit_accounting(lexical):
    from sxq.memtree import load_memory
    import json

    memory_doc, script = planted_session(random.Random(1), turns=6)
    tree = load_memory(json.dumps(memory_doc))
    rows, _ = run_bench(tree, parse_session(script), scorer=lexical)
    sxq_hits = _column(rows, "sxq", "hit")
    flat_hits = _column(rows, "flat", "hit")
    assert set(sxq_hits) <= {"0", "1"} and set(flat_hits) <= {"0", "1"}
    assert sum(h == "1" for h in sxq_hits) >= sum(h == "1" for h in flat_hits)
    # the full-memory strategy trivially contains every target
    assert all(h == "1" for h in _column(rows, "in-context", "hit"))


def test_bench_aborts_with_turn_index(acl_tree, lexical):
    turns = [
        Turn(request="fine turn", query="/Version"),
        Turn(request="bad turn", mutate={"action": "delete", "targets": ["ghost"]}),
    ]
    with pytest.raises(SessionScriptError) as err:
        run_bench(acl_tree, turns, scorer=lexical)
    assert err.value.turn_index == 1


def test_parse_session_validation():
    with pytest.raises(Exception):
        parse_session({"turns": [{"query": "/Day"}]})  # missing request
    with pytest.raises(Exception):
        parse_session({})


def test_rows_to_csv():
    rows = [{"turn": 1, "strategy": "sxq", "tokens": 17, "hit": ""}]
    assert rows_to_csv(rows) == "turn,strategy,tokens,hit\n1,sxq,17,\n"
