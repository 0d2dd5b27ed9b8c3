"""Revision history as version branches, and retrieval across revisions.

Edits never touch existing nodes: each one appends a fresh-id copy of a
source version with the edit applied and a summary attribute recording
why. Old versions therefore stay queryable forever, including entries
that a later revision deleted.

Run from anywhere:  python demos/04_versioned_memory.py
"""

from pathlib import Path

from sxq import (
    DeleteEdit,
    InsertEdit,
    ScorerSpec,
    evaluate,
    insert_version,
    load_memory_file,
    parse,
    rank,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
lexical = ScorerSpec()

tree = load_memory_file(FIXTURES / "acl_trip.json")

# Edit 1: add a coffee break to the conference-heavy day.
coffee = InsertEdit(parent_id="d2",
                    subtree={"type": "POI", "attributes": {"title": "coffee break", "time": "15:30"}})
tree = insert_version(tree, "v1", coffee, "add coffee break on day 2")

# Edit 2: cancel the poster session (branching from the newest version).
latest = tree.children(tree.root_id)[-1]
poster = next(n for n in tree.descendants(latest) if "poster" in tree.node_text(n))
tree = insert_version(tree, latest, DeleteEdit((poster,)), "delete poster session")

print("versions now:")
for vid in tree.children(tree.root_id):
    print(f"  {vid}: {tree.nodes[vid].attributes.get('summary')}")
print()

# The current plan no longer has the poster session...
current = parse('//Version[-1]//POI[node ~= "poster"]')
hits = [(n, w) for n, w in evaluate(tree, current, lexical)[0].entries if w > 0]
print("poster POIs in the newest version:", hits or "none")

# ...but "what was the poster session time again?" is answerable by
# matching the revision summary and reading the prior version's content.
recovery = parse('//Version[node ~= "delete poster session"]//POI[node ~= "poster"]')
weighted, _ = evaluate(tree, recovery, lexical)
print("poster POIs under the deleting revision:",
      [(n, w) for n, w in weighted.entries if w > 0] or "none (it deleted them)")

first_version = parse('//Version[1]//POI[node ~= "poster"]')
top = rank(evaluate(tree, first_version, lexical)[0])
print("recovered from version 1:", tree.node_text(top.top_id))
print()

# The original fixture object was never modified; mutations return values.
original = load_memory_file(FIXTURES / "acl_trip.json")
print("original still has", len(original.children(original.root_id)), "version;",
      "derived tree has", len(tree.children(tree.root_id)))
