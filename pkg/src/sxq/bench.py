"""Session replay comparing per-turn context budgets of three strategies.

* in-context: the whole conversation transcript so far plus a full
  serialization of the current memory; grows every turn by construction.
* flat: the top-k flat-retrieved node texts for the turn's request.
* sxq: the token count of the top query match's subtree.

Each turn is measured first (against the memory as of the previous turn)
and its mutation, if any, is applied afterwards, mirroring a
retrieve-then-update interaction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .baseline import flat_retrieve, flatten
from .errors import SxqError
from .executor import evaluate, rank
from .memtree import MemoryTree, count_tokens, insert_version, parse_edit
from .query import parse
from .scorers import ScorerSpec, as_scorer

STRATEGIES = ("in-context", "flat", "sxq")


class SessionScriptError(SxqError):
    """A turn could not be replayed; carries the 0-based turn index."""

    def __init__(self, turn_index: int, message: str):
        self.turn_index = turn_index
        super().__init__(f"turn {turn_index}: {message}")


@dataclass(frozen=True)
class Turn:
    request: str
    query: Optional[str] = None
    mutate: Optional[dict] = None
    summary: str = ""
    target: Optional[str] = None


def parse_session(doc: dict) -> list[Turn]:
    if not isinstance(doc, dict) or not isinstance(doc.get("turns"), list):
        raise SxqError("session script must be an object with a 'turns' list")
    turns = []
    for index, raw in enumerate(doc["turns"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("request"), str) or not raw["request"].strip():
            raise SessionScriptError(index, "every turn needs a non-empty 'request' string")
        turns.append(
            Turn(
                request=raw["request"],
                query=raw.get("query"),
                mutate=raw.get("mutate"),
                summary=raw.get("summary", ""),
                target=raw.get("target"),
            )
        )
    return turns


def _contains(tree: MemoryTree, top_id: Optional[str], target: str) -> bool:
    if top_id is None or target not in tree:
        return False
    return top_id == target or target in tree.descendants(top_id)


def _latest_version(tree: MemoryTree) -> str:
    versions = tree.children(tree.root_id)
    if not versions:
        raise SxqError("memory has no version branches to mutate")
    return versions[-1]


def run_bench(tree: MemoryTree, turns: list[Turn], strategies=STRATEGIES,
              scorer: Optional[ScorerSpec] = None, k: int = 5):
    """Replay a session; yields one row dict per (turn, strategy).

    Rows carry 1-based turn numbers, whitespace-token counts, and a hit
    flag ("1"/"0" when the turn annotates a target, "" otherwise): did the
    strategy's top result contain the target node?
    """
    scorer = as_scorer(scorer or ScorerSpec())
    rows: list[dict] = []
    transcript_tokens = 0
    for index, turn in enumerate(turns):
        transcript_tokens += count_tokens(turn.request)
        memory_rendering = tree.serialize_subtree(tree.root_id)

        if "in-context" in strategies:
            hit = "" if turn.target is None else ("1" if turn.target in tree else "0")
            rows.append(
                {
                    "turn": index + 1,
                    "strategy": "in-context",
                    "tokens": transcript_tokens + memory_rendering.token_count,
                    "hit": hit,
                }
            )
        if "flat" in strategies:
            items = flatten(tree)
            top = flat_retrieve(items, turn.request, k, scorer)
            text_of = {item.node_id: item.text for item in items}
            hit = ""
            if turn.target is not None:
                hit = "1" if top and _contains(tree, top[0][0], turn.target) else "0"
            rows.append(
                {
                    "turn": index + 1,
                    "strategy": "flat",
                    "tokens": sum(count_tokens(text_of[nid]) for nid, _ in top),
                    "hit": hit,
                }
            )
        if "sxq" in strategies:
            tokens = 0
            top_id = None
            if turn.query is not None:
                try:
                    weighted, _ = evaluate(tree, parse(turn.query), scorer)
                except SxqError as exc:
                    raise SessionScriptError(index, f"query failed: {exc}") from exc
                top_id = rank(weighted).top_id
                if top_id is not None:
                    tokens = tree.serialize_subtree(top_id).token_count
            hit = ""
            if turn.target is not None:
                hit = "1" if _contains(tree, top_id, turn.target) else "0"
            rows.append({"turn": index + 1, "strategy": "sxq", "tokens": tokens, "hit": hit})

        if turn.mutate is not None:
            try:
                edit, source = parse_edit(turn.mutate)
                tree = insert_version(tree, source or _latest_version(tree), edit, turn.summary)
            except SxqError as exc:
                raise SessionScriptError(index, f"mutation failed: {exc}") from exc
    return rows, tree


def rows_to_csv(rows: list[dict]) -> str:
    lines = ["turn,strategy,tokens,hit"]
    for row in rows:
        lines.append(f"{row['turn']},{row['strategy']},{row['tokens']},{row['hit']}")
    return "\n".join(lines) + "\n"
