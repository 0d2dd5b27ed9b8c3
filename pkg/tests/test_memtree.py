from __future__ import annotations

import json
import random

import pytest

from sxq.errors import (
    MemoryParseError,
    MutationError,
    SchemaViolationError,
    UnknownNodeError,
)
from sxq.memtree import (
    DeleteEdit,
    InsertEdit,
    MemoryTree,
    NoEdit,
    Node,
    Schema,
    dump_memory,
    insert_version,
    load_memory,
    parse_edit,
    to_document,
)
from sxq.synthetic import random_tree


def doc_text(doc: dict) -> str:
    return json.dumps(doc)


MINI_SCHEMA = {
    "nodeTypes": ["Itinerary", "Version", "Day", "POI"],
    "allowedChildren": {"Itinerary": ["Version"], "Version": ["Day"], "Day": ["POI"], "POI": []},
    "allowedAttributes": {"Itinerary": ["title"], "Version": ["summary"], "Day": ["label"], "POI": ["title", "time"]},
}


def test_load_acl_fixture(acl_tree):
    root = acl_tree.nodes[acl_tree.root_id]
    assert root.node_type == "Itinerary"
    versions = acl_tree.children(acl_tree.root_id)
    assert [acl_tree.nodes[v].node_type for v in versions] == ["Version"]
    days = acl_tree.children(versions[0])
    assert [acl_tree.nodes[d].node_type for d in days] == ["Day"] * 3
    for day in days:
        assert all(acl_tree.nodes[p].node_type == "POI" for p in acl_tree.children(day))
    assert len(acl_tree.children("d2")) == 3


def test_load_single_node():
    doc = {"schema": {"nodeTypes": ["Solo"], "allowedChildren": {}, "allowedAttributes": {}},
           "root": {"id": "only", "type": "Solo", "attributes": {}, "children": []}}
    tree = load_memory(doc_text(doc))
    assert list(tree.nodes) == ["only"]


def test_load_rejects_misparented_day():
    doc = {
        "schema": MINI_SCHEMA,
        "root": {"id": "r", "type": "Itinerary", "attributes": {},
                 "children": [{"id": "d", "type": "Day", "attributes": {}, "children": []}]},
    }
    with pytest.raises(SchemaViolationError) as err:
        load_memory(doc_text(doc))
    assert any(v.node_id == "r" and "Day" in v.rule for v in err.value.violations)


def test_load_rejects_bad_json_and_shapes():
    with pytest.raises(MemoryParseError):
        load_memory("{nope")
    with pytest.raises(MemoryParseError):
        load_memory(json.dumps({"schema": MINI_SCHEMA}))
    with pytest.raises(MemoryParseError):
        load_memory(json.dumps({"schema": {"nodeTypes": []}, "root": {}}))


def test_load_rejects_duplicate_ids():
    doc = {
        "schema": MINI_SCHEMA,
        "root": {"id": "r", "type": "Itinerary", "attributes": {},
                 "children": [
                     {"id": "x", "type": "Version", "attributes": {}, "children": []},
                     {"id": "x", "type": "Version", "attributes": {}, "children": []},
                 ]},
    }
    with pytest.raises(MemoryParseError, match="duplicate"):
        load_memory(doc_text(doc))


def test_children(acl_tree):
    assert acl_tree.children(acl_tree.root_id) == ["v1"]
    assert acl_tree.children("d1p1") == []
    with pytest.raises(UnknownNodeError):
        acl_tree.children("ghost")


def test_descendants(acl_tree):
    order = acl_tree.document_order()
    assert acl_tree.descendants(acl_tree.root_id) == order[1:]
    assert acl_tree.descendants("d3p2") == []
    assert acl_tree.descendants("d2") == ["d2p1", "d2p2", "d2p3"]


def _chain_tree() -> MemoryTree:
    schema = Schema(("A",), {"A": ("A",)}, {})
    nodes = {
        "root": Node("root", "A", {}, ["a"]),
        "a": Node("a", "A", {}, ["b"]),
        "b": Node("b", "A", {}, []),
    }
    return MemoryTree(schema, "root", nodes)


def test_document_order_chain_and_branch():
    assert _chain_tree().document_order() == ["root", "a", "b"]
    schema = Schema(("A",), {"A": ("A",)}, {})
    nodes = {
        "root": Node("root", "A", {}, ["a", "b"]),
        "a": Node("a", "A", {}, ["c"]),
        "b": Node("b", "A", {}, []),
        "c": Node("c", "A", {}, []),
    }
    assert MemoryTree(schema, "root", nodes).document_order() == ["root", "a", "c", "b"]


def test_document_order_fixture_prefix(acl_tree):
    order = acl_tree.document_order()
    assert order[:4] == ["itin", "v1", "d1", "d1p1"]
    assert order.index("d2") == order.index("d1p3") + 1


def test_node_text(acl_tree):
    assert acl_tree.node_text("d1p2") == "POI welcome reception 18:00"
    bare = load_memory(doc_text({
        "schema": {"nodeTypes": ["Solo"], "allowedChildren": {}, "allowedAttributes": {}},
        "root": {"id": "s", "type": "Solo", "attributes": {}, "children": []},
    }))
    assert bare.node_text("s") == "Solo"
    # determinism: same type + attributes => same text
    assert acl_tree.node_text("d1p2") == acl_tree.node_text("d1p2")


def test_serialize_subtree(acl_tree):
    leaf = acl_tree.serialize_subtree("d1p1")
    assert leaf.text == "POI hotel check in 15:00"
    assert leaf.token_count == 5
    day2 = acl_tree.serialize_subtree("d2")
    assert len(day2.text.splitlines()) == 1 + 3
    assert acl_tree.serialize_subtree(acl_tree.root_id) == acl_tree.serialize_subtree(acl_tree.root_id)


COFFEE = InsertEdit(parent_id="d2", subtree={"type": "POI", "attributes": {"title": "coffee break", "time": "15:30"}})


def test_insert_version_coffee_break(acl_tree):
    before = dump_memory(acl_tree)
    new = insert_version(acl_tree, "v1", COFFEE, "add coffee break on day 2")
    v2 = new.children(new.root_id)[-1]
    assert v2 != "v1"
    texts = [new.node_text(nid) for nid in new.descendants(v2)]
    assert "POI coffee break 15:30" in texts
    # source version untouched, original tree untouched
    assert new.serialize_subtree("v1").text == acl_tree.serialize_subtree("v1").text
    assert dump_memory(acl_tree) == before
    assert new.revision == acl_tree.revision + 1
    assert new.nodes[v2].attributes["summary"] == "add coffee break on day 2"


def test_insert_version_delete(acl_tree):
    new = insert_version(acl_tree, "v1", DeleteEdit(("d2p2",)), "delete poster session")
    v2 = new.children(new.root_id)[-1]
    texts = [new.node_text(nid) for nid in new.descendants(v2)]
    assert not any("poster" in t for t in texts)
    assert any("poster" in acl_tree.node_text(n) for n in acl_tree.descendants("v1"))
    assert new.serialize_subtree("v1").text == acl_tree.serialize_subtree("v1").text


def test_insert_version_noop_copy(acl_tree):
    new = insert_version(acl_tree, "v1", NoEdit(), "checkpoint")
    v2 = new.children(new.root_id)[-1]
    old_texts = [acl_tree.node_text(n) for n in acl_tree.descendants("v1")]
    new_texts = [new.node_text(n) for n in new.descendants(v2)]
    assert old_texts == new_texts
    assert set(new.descendants(v2)).isdisjoint(set(acl_tree.nodes))  # fresh ids


def test_insert_version_errors(acl_tree):
    with pytest.raises(UnknownNodeError):
        insert_version(acl_tree, "nope", NoEdit(), "x")
    with pytest.raises(MutationError):
        insert_version(acl_tree, "d2", NoEdit(), "x")  # not a version-level node
    with pytest.raises(MutationError):
        insert_version(acl_tree, "v1", InsertEdit("itin", {"type": "POI", "attributes": {}}), "x")
    with pytest.raises(MutationError):
        insert_version(acl_tree, "v1", DeleteEdit(("v1",)), "x")
    with pytest.raises(SchemaViolationError):
        insert_version(acl_tree, "v1", InsertEdit("d2", {"type": "Day", "attributes": {}}), "x")


def test_validate_reports_violations(acl_tree):
    assert acl_tree.validate() == []
    nodes = {nid: Node(n.id, n.node_type, dict(n.attributes), list(n.children))
             for nid, n in acl_tree.nodes.items()}
    nodes["d2p1"].attributes["color"] = "red"
    bad = MemoryTree(acl_tree.schema, acl_tree.root_id, nodes)
    violations = bad.validate()
    assert len(violations) == 1 and violations[0].node_id == "d2p1" and "color" in violations[0].rule


def test_parse_edit():
    edit, source = parse_edit({"action": "insert", "parent": "d2", "subtree": {"type": "POI"}})
    assert isinstance(edit, InsertEdit) and source is None
    edit, source = parse_edit({"source": "v1", "action": "delete", "targets": ["a", "b"]})
    assert edit == DeleteEdit(("a", "b")) and source == "v1"
    assert parse_edit({"action": "none"})[0] == NoEdit()
    for bad in ({"action": "insert"}, {"action": "delete", "targets": []}, {"action": "zap"}, []):
        with pytest.raises(MutationError):
            parse_edit(bad)


# -- module invariants --------------------------------------------------------


def test_descendants_decompose_and_order():
    rng = random.Random(11)
    for _ in range(25):
        tree = random_tree(rng, max_nodes=30)
        order = tree.document_order()
        position = {nid: k for k, nid in enumerate(order)}
        for nid in order:
            expected = []
            for child in tree.children(nid):
                expected.append(child)
                expected.extend(tree.descendants(child))
            got = tree.descendants(nid)
            assert got == expected
            assert got == sorted(got, key=position.__getitem__)
            # document order restricted to a subtree is that subtree's pre-order
            subtree = [nid, *got]
            assert [x for x in order if x in set(subtree)] == subtree


def test_roundtrip_identity(acl_tree):
    text = dump_memory(acl_tree)
    again = load_memory(text)
    assert to_document(again) == to_document(acl_tree)
    assert dump_memory(again) == text


def test_roundtrip_random_trees():
    rng = random.Random(5)
    for _ in range(20):
        tree = random_tree(rng, max_nodes=40)
        assert to_document(load_memory(dump_memory(tree))) == to_document(tree)


def test_token_count_grows_after_insert(acl_tree):
    base = acl_tree.serialize_subtree(acl_tree.root_id).token_count
    grown = insert_version(acl_tree, "v1", COFFEE, "more coffee")
    assert grown.serialize_subtree(grown.root_id).token_count > base


def test_shipped_domain_fixtures_are_valid():
    from conftest import FIXTURES
    from sxq.memtree import load_memory_file

    todo = load_memory_file(FIXTURES / "todo_list.json")
    assert todo.validate() == []
    assert len(todo.children(todo.children(todo.root_id)[0])) == 5  # five categories

    meals = load_memory_file(FIXTURES / "meal_kit.json")
    assert meals.validate() == []
    options = [n for n in meals.document_order() if meals.nodes[n].node_type == "Option"]
    assert len(options) == 9  # three options per meal slot
