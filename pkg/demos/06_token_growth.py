"""Reproduce the token-growth comparison over a scripted session.

Ten turns, one edit per turn. The in-context strategy pays for the whole
transcript plus the whole (growing) memory every turn; retrieval pays
only for the subtree it fetches, which stays flat.

Run from anywhere:  python demos/06_token_growth.py
"""

import json
from pathlib import Path

from sxq import load_memory_file
from sxq.bench import parse_session, run_bench

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

tree = load_memory_file(FIXTURES / "acl_trip.json")
with open(FIXTURES / "session_10turn.json", encoding="utf-8") as fh:
    turns = parse_session(json.load(fh))

rows, final_tree = run_bench(tree, turns)

columns: dict[str, list[int]] = {}
for row in rows:
    columns.setdefault(row["strategy"], []).append(row["tokens"])

width = max(len(name) for name in columns)
print("tokens per turn")
print("turn        " + "  ".join(f"{t:>5}" for t in range(1, 11)))
for name, tokens in columns.items():
    print(f"{name:<{width}}  " + "  ".join(f"{t:>5}" for t in tokens))
print()

in_context = columns["in-context"]
sxq = columns["sxq"]
print(f"in-context grows {in_context[0]} -> {in_context[-1]} "
      f"({in_context[-1] / in_context[0]:.1f}x over 10 turns)")
print(f"retrieval stays at {min(sxq)}..{max(sxq)} tokens")
print(f"final memory: {len(final_tree.children(final_tree.root_id))} versions, "
      f"{len(final_tree.nodes)} nodes")

# A simple bar rendering of the same columns.
scale = max(in_context) / 60
print()
for turn, (a, b) in enumerate(zip(in_context, sxq), start=1):
    print(f"turn {turn:>2}  in-context {'#' * max(1, round(a / scale)):<62}{a}")
    print(f"         sxq        {'#' * max(1, round(b / scale)):<62}{b}")
