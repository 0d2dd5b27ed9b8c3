"""Schema-governed, versioned memory trees.

A memory tree is a rooted tree of typed nodes with textual attributes,
validated against a schema that fixes which node types may appear where
and which attributes each type may carry.  Trees are immutable values:
every mutation (see :func:`insert_version`) returns a new tree and leaves
the original untouched, so old revisions stay byte-identical and can be
queried later.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass

from .errors import (
    MemoryParseError,
    MutationError,
    SchemaViolationError,
    UnknownNodeError,
    Violation,
)

INDENT = "  "


def count_tokens(text: str) -> int:
    """Number of maximal non-whitespace runs in text."""
    return len(text.split())


@dataclass(frozen=True)
class Schema:
    """Node-type vocabulary plus the parent/child and attribute rules.

    node_types is ordered; its first entry is the required root type.
    """

    node_types: tuple[str, ...]
    allowed_children: dict[str, tuple[str, ...]]
    allowed_attributes: dict[str, tuple[str, ...]]

    def __post_init__(self):
        if not self.node_types:
            raise ValueError("schema must declare at least one node type")
        known = set(self.node_types)
        for parent, kids in self.allowed_children.items():
            for name in (parent, *kids):
                if name not in known:
                    raise ValueError(f"allowedChildren references unknown type {name!r}")
        for owner in self.allowed_attributes:
            if owner not in known:
                raise ValueError(f"allowedAttributes references unknown type {owner!r}")

    @property
    def root_type(self) -> str:
        return self.node_types[0]

    def children_of(self, node_type: str) -> tuple[str, ...]:
        return self.allowed_children.get(node_type, ())

    def attributes_of(self, node_type: str) -> tuple[str, ...]:
        return self.allowed_attributes.get(node_type, ())

    def to_document(self) -> dict:
        return {
            "nodeTypes": list(self.node_types),
            "allowedChildren": {t: list(k) for t, k in self.allowed_children.items()},
            "allowedAttributes": {t: list(a) for t, a in self.allowed_attributes.items()},
        }


@dataclass
class Node:
    """One unit of conversational state: a typed node with text attributes.

    attributes preserves insertion order; that order is meaningful (it is
    the word order of the node's canonical text).
    """

    id: str
    node_type: str
    attributes: dict[str, str]
    children: list[str]


@dataclass(frozen=True)
class SubtreeSerialization:
    """Rendered subtree plus its whitespace-token count."""

    text: str
    token_count: int


class MemoryTree:
    """Immutable rooted tree of :class:`Node` values under a :class:`Schema`.

    Never mutate a tree in place; derive new trees via :func:`insert_version`.
    Instances precompute document order and parent links, so traversal
    lookups are O(1) and values can be shared freely across threads.
    """

    def __init__(self, schema: Schema, root_id: str, nodes: dict[str, Node], revision: int = 0):
        self.schema = schema
        self.root_id = root_id
        self.nodes = nodes
        self.revision = revision
        if root_id not in nodes:
            raise MemoryParseError(f"root id {root_id!r} not among nodes")
        self._order: list[str] = []
        self._parent: dict[str, str] = {}
        stack = [root_id]
        seen = set()
        while stack:
            nid = stack.pop()
            if nid in seen:
                raise MemoryParseError(f"node {nid!r} reachable twice (not a tree)")
            seen.add(nid)
            self._order.append(nid)
            node = nodes.get(nid)
            if node is None:
                raise MemoryParseError(f"child id {nid!r} has no node entry")
            for child in node.children:
                self._parent[child] = nid
            stack.extend(reversed(node.children))
        if seen != set(nodes):
            orphans = sorted(set(nodes) - seen)
            raise MemoryParseError(f"nodes not reachable from root: {orphans}")
        self._pos = {nid: i for i, nid in enumerate(self._order)}

    # -- traversal -------------------------------------------------------

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def children(self, node_id: str) -> list[str]:
        """Child ids of node_id in stored order."""
        return list(self.node(node_id).children)

    def descendants(self, node_id: str) -> list[str]:
        """All proper descendants of node_id in document order."""
        self.node(node_id)
        out: list[str] = []
        stack = list(reversed(self.nodes[node_id].children))
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(reversed(self.nodes[nid].children))
        return out

    def parent(self, node_id: str) -> str | None:
        self.node(node_id)
        return self._parent.get(node_id)

    def path_to(self, node_id: str) -> list[str]:
        """Ids from the root down to node_id, inclusive."""
        self.node(node_id)
        path = [node_id]
        while (up := self._parent.get(path[-1])) is not None:
            path.append(up)
        return path[::-1]

    def document_order(self) -> list[str]:
        """Pre-order depth-first id sequence, children in stored order."""
        return list(self._order)

    def order_index(self, node_id: str) -> int:
        try:
            return self._pos[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    # -- rendering -------------------------------------------------------

    def node_text(self, node_id: str) -> str:
        """Canonical text: node type, then attribute values in stored order."""
        node = self.node(node_id)
        return " ".join([node.node_type, *node.attributes.values()])

    def serialize_subtree(self, node_id: str) -> SubtreeSerialization:
        """One indented line per node of the subtree rooted at node_id."""
        self.node(node_id)
        lines: list[str] = []
        stack: list[tuple[str, int]] = [(node_id, 0)]
        while stack:
            nid, depth = stack.pop()
            lines.append(INDENT * depth + self.node_text(nid))
            for child in reversed(self.nodes[nid].children):
                stack.append((child, depth + 1))
        text = "\n".join(lines)
        return SubtreeSerialization(text=text, token_count=count_tokens(text))

    # -- validation ------------------------------------------------------

    def validate(self) -> list[Violation]:
        """All schema violations in the tree; empty when the tree is valid."""
        out: list[Violation] = []
        schema = self.schema
        known = set(schema.node_types)
        root = self.nodes[self.root_id]
        if root.node_type != schema.root_type:
            out.append(Violation(root.id, f"root must have type {schema.root_type!r}, got {root.node_type!r}"))
        for nid in self._order:
            node = self.nodes[nid]
            if node.node_type not in known:
                out.append(Violation(nid, f"unknown node type {node.node_type!r}"))
                continue
            allowed_attrs = set(schema.attributes_of(node.node_type))
            for attr in node.attributes:
                if attr not in allowed_attrs:
                    out.append(Violation(nid, f"attribute {attr!r} not allowed on {node.node_type!r}"))
            allowed_kids = set(schema.children_of(node.node_type))
            for child in node.children:
                child_type = self.nodes[child].node_type
                if child_type not in allowed_kids:
                    out.append(
                        Violation(nid, f"child {child!r} of type {child_type!r} not allowed under {node.node_type!r}")
                    )
        return out


# -- document I/O ---------------------------------------------------------


def _require(condition: bool, message: str):
    if not condition:
        raise MemoryParseError(message)


def _schema_from_document(doc) -> Schema:
    _require(isinstance(doc, dict), "schema must be an object")
    types = doc.get("nodeTypes")
    _require(isinstance(types, list) and types and all(isinstance(t, str) for t in types),
             "schema.nodeTypes must be a non-empty list of strings")
    children = doc.get("allowedChildren", {})
    attrs = doc.get("allowedAttributes", {})
    _require(isinstance(children, dict), "schema.allowedChildren must be an object")
    _require(isinstance(attrs, dict), "schema.allowedAttributes must be an object")
    try:
        return Schema(
            node_types=tuple(types),
            allowed_children={t: tuple(k) for t, k in children.items()},
            allowed_attributes={t: tuple(a) for t, a in attrs.items()},
        )
    except ValueError as exc:
        raise MemoryParseError(str(exc)) from None


def _nodes_from_document(doc, nodes: dict[str, Node]) -> str:
    _require(isinstance(doc, dict), "node must be an object")
    node_id = doc.get("id")
    _require(isinstance(node_id, str) and node_id != "", "node is missing a string id")
    _require(node_id not in nodes, f"duplicate node id {node_id!r}")
    node_type = doc.get("type")
    _require(isinstance(node_type, str), f"node {node_id!r} is missing a string type")
    attributes = doc.get("attributes", {})
    _require(isinstance(attributes, dict), f"node {node_id!r}: attributes must be an object")
    for name, value in attributes.items():
        _require(isinstance(value, str), f"node {node_id!r}: attribute {name!r} must be a string")
    children_doc = doc.get("children", [])
    _require(isinstance(children_doc, list), f"node {node_id!r}: children must be a list")
    nodes[node_id] = Node(id=node_id, node_type=node_type, attributes=dict(attributes), children=[])
    kids = [_nodes_from_document(child, nodes) for child in children_doc]
    nodes[node_id].children = kids
    return node_id


def load_memory(document: str) -> MemoryTree:
    """Parse a memory document (UTF-8 JSON text) into a validated tree.

    Raises MemoryParseError for malformed documents and
    SchemaViolationError when the tree breaks its own schema.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MemoryParseError(f"invalid JSON: {exc}") from None
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require("schema" in doc, "document is missing 'schema'")
    _require("root" in doc, "document is missing 'root'")
    schema = _schema_from_document(doc["schema"])
    nodes: dict[str, Node] = {}
    root_id = _nodes_from_document(doc["root"], nodes)
    tree = MemoryTree(schema=schema, root_id=root_id, nodes=nodes)
    violations = tree.validate()
    if violations:
        raise SchemaViolationError(violations)
    return tree


def load_memory_file(path) -> MemoryTree:
    with open(path, encoding="utf-8") as fh:
        return load_memory(fh.read())


def _node_to_document(tree: MemoryTree, node_id: str) -> dict:
    node = tree.nodes[node_id]
    return {
        "id": node.id,
        "type": node.node_type,
        "attributes": dict(node.attributes),
        "children": [_node_to_document(tree, c) for c in node.children],
    }


def to_document(tree: MemoryTree) -> dict:
    return {"schema": tree.schema.to_document(), "root": _node_to_document(tree, tree.root_id)}


def dump_memory(tree: MemoryTree) -> str:
    """Inverse of load_memory: ids, order and attributes round-trip exactly."""
    return json.dumps(to_document(tree), ensure_ascii=False, indent=2) + "\n"


# -- version-branch mutation ----------------------------------------------


@dataclass(frozen=True)
class InsertEdit:
    """Graft a new subtree under parent_id (an id inside the source version)."""

    parent_id: str
    subtree: dict


@dataclass(frozen=True)
class DeleteEdit:
    """Remove the subtrees rooted at each target id (inside the source version)."""

    target_ids: tuple[str, ...]


@dataclass(frozen=True)
class NoEdit:
    """Structural copy only."""


Edit = InsertEdit | DeleteEdit | NoEdit


def parse_edit(spec: dict) -> tuple[Edit, str | None]:
    """Decode a mutation-spec object into (edit, optional source version id).

    Format: {"source"?: id, "action": "insert"|"delete"|"none", ...} with
    "parent" + "subtree" for inserts and "targets" for deletes.  Subtree
    node ids are optional; missing ids are generated at apply time.
    """
    if not isinstance(spec, dict):
        raise MutationError("mutation spec must be a JSON object")
    source = spec.get("source")
    if source is not None and not isinstance(source, str):
        raise MutationError("mutation spec 'source' must be a node id string")
    action = spec.get("action")
    if action == "insert":
        parent = spec.get("parent")
        subtree = spec.get("subtree")
        if not isinstance(parent, str):
            raise MutationError("insert spec needs a 'parent' node id")
        if not isinstance(subtree, dict):
            raise MutationError("insert spec needs a 'subtree' node object")
        return InsertEdit(parent_id=parent, subtree=subtree), source
    if action == "delete":
        targets = spec.get("targets")
        if not isinstance(targets, list) or not all(isinstance(t, str) for t in targets) or not targets:
            raise MutationError("delete spec needs a non-empty 'targets' id list")
        return DeleteEdit(target_ids=tuple(targets)), source
    if action == "none":
        return NoEdit(), source
    raise MutationError(f"unknown mutation action {action!r}")


def _fresh_id_factory(existing: set[str], revision: int):
    counter = [0]

    def fresh() -> str:
        while True:
            counter[0] += 1
            candidate = f"r{revision}n{counter[0]}"
            if candidate not in existing:
                existing.add(candidate)
                return candidate

    return fresh


def _copy_subtree(tree: MemoryTree, node_id: str, fresh, mapping: dict[str, str],
                  out: dict[str, Node]) -> str:
    node = tree.nodes[node_id]
    new_id = fresh()
    mapping[node_id] = new_id
    out[new_id] = Node(
        id=new_id,
        node_type=node.node_type,
        attributes=dict(node.attributes),
        children=[_copy_subtree(tree, c, fresh, mapping, out) for c in node.children],
    )
    return new_id


def _build_subtree(doc: dict, fresh, existing: set[str], out: dict[str, Node]) -> str:
    if not isinstance(doc, dict):
        raise MutationError("subtree node must be an object")
    node_id = doc.get("id")
    if node_id is None:
        node_id = fresh()
    elif not isinstance(node_id, str):
        raise MutationError("subtree node id must be a string")
    elif node_id in existing:
        raise MutationError(f"subtree node id {node_id!r} already exists in the tree")
    else:
        existing.add(node_id)
    node_type = doc.get("type")
    if not isinstance(node_type, str):
        raise MutationError(f"subtree node {node_id!r} is missing a string type")
    attributes = doc.get("attributes", {})
    if not isinstance(attributes, dict) or not all(isinstance(v, str) for v in attributes.values()):
        raise MutationError(f"subtree node {node_id!r}: attributes must map names to strings")
    children_doc = doc.get("children", [])
    if not isinstance(children_doc, list):
        raise MutationError(f"subtree node {node_id!r}: children must be a list")
    out[node_id] = Node(id=node_id, node_type=node_type, attributes=dict(attributes), children=[])
    out[node_id].children = [_build_subtree(c, fresh, existing, out) for c in children_doc]
    return node_id


def insert_version(tree: MemoryTree, source_version_id: str, edit: Edit,
                   edit_summary: str) -> MemoryTree:
    """Append a new version branch: a fresh-id copy of a source version with
    one edit applied and a 'summary' attribute recording why.

    The source version (and every other pre-existing node) is left
    untouched; the returned tree shares no node objects with the input.
    """
    if source_version_id not in tree.nodes:
        raise UnknownNodeError(source_version_id)
    if source_version_id not in tree.nodes[tree.root_id].children:
        raise MutationError(f"source {source_version_id!r} is not a version (direct child of the root)")

    revision = tree.revision + 1
    existing = set(tree.nodes)
    fresh = _fresh_id_factory(existing, revision)
    mapping: dict[str, str] = {}
    copied: dict[str, Node] = {}
    new_version_id = _copy_subtree(tree, source_version_id, fresh, mapping, copied)

    if isinstance(edit, InsertEdit):
        if edit.parent_id not in mapping:
            raise MutationError(f"insert parent {edit.parent_id!r} is outside the source version")
        grafted: dict[str, Node] = {}
        graft_root = _build_subtree(edit.subtree, fresh, existing, grafted)
        copied.update(grafted)
        copied[mapping[edit.parent_id]].children.append(graft_root)
    elif isinstance(edit, DeleteEdit):
        doomed: set[str] = set()
        for target in edit.target_ids:
            if target not in mapping:
                raise MutationError(f"delete target {target!r} is outside the source version")
            if target == source_version_id:
                raise MutationError("cannot delete the version root itself")
            new_target = mapping[target]
            doomed.add(new_target)
            stack = list(copied[new_target].children)
            while stack:
                nid = stack.pop()
                doomed.add(nid)
                stack.extend(copied[nid].children)
        copied = {nid: node for nid, node in copied.items() if nid not in doomed}
        for node in copied.values():
            node.children = [c for c in node.children if c not in doomed]
    elif not isinstance(edit, NoEdit):
        raise MutationError(f"unsupported edit {edit!r}")

    version = copied[new_version_id]
    version.attributes = {**version.attributes, "summary": edit_summary}

    nodes = {nid: copy.deepcopy(node) for nid, node in tree.nodes.items()}
    nodes.update(copied)
    nodes[tree.root_id].children.append(new_version_id)
    new_tree = MemoryTree(schema=tree.schema, root_id=tree.root_id, nodes=nodes, revision=revision)
    violations = new_tree.validate()
    if violations:
        raise SchemaViolationError(violations)
    return new_tree
