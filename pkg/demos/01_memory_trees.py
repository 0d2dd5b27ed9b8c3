"""Walk through the memory-tree basics on the conference-trip fixture.

Run from anywhere:  python demos/01_memory_trees.py
"""

from pathlib import Path

from sxq import load_memory_file

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

tree = load_memory_file(FIXTURES / "acl_trip.json")

# The fixture is a three-day conference trip: one Itinerary root, one
# Version branch, three Days, three POIs per day.
print("root:", tree.node_text(tree.root_id))
print("revision:", tree.revision)
print("nodes:", len(tree.nodes))
print()

# Traversal primitives. Everything is id-based and document-ordered.
version = tree.children(tree.root_id)[0]
print("versions:", tree.children(tree.root_id))
print("days:", tree.children(version))
print("day 2 POIs:", tree.children("d2"))
print()

# document_order is a pre-order walk: parent before children, siblings in
# stored order. It is the order every positional selector indexes into.
print("document order:")
for nid in tree.document_order():
    depth = len(tree.path_to(nid)) - 1
    print("  " * depth + f"{nid}: {tree.node_text(nid)}")
print()

# A subtree serialization is what gets handed downstream as context; its
# token count is the number of whitespace-separated tokens.
rendering = tree.serialize_subtree("d2")
print("day 2 rendered:")
print(rendering.text)
print("token count:", rendering.token_count)
print()

# Schema validation is structural: types, parent/child pairs, attributes.
print("violations in fixture:", tree.validate())
