"""Desk-scale synthetic data: random trees/queries for oracle testing and
planted-target retrieval instances for the structured-vs-flat comparison.

Everything here is driven by a caller-supplied random.Random, so suites
are reproducible from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .memtree import MemoryTree, Node, Schema
from .query import (
    Agg,
    AggOp,
    AttributeTarget,
    Axis,
    Binary,
    BinaryOp,
    FromEnd,
    Index,
    Local,
    Not,
    Query,
    Range,
    Step,
    TypeName,
    WholeNode,
    Wildcard,
)

_TYPES = ("Board", "Lane", "Card", "Note", "Tag")
_ATTRS = ("title", "body", "mark")
_WORDS = (
    "alpha", "beta", "gamma", "delta", "harbor", "museum", "coffee",
    "workshop", "conference", "outdoor", "sunset", "kayak", "poster",
    "review", "draft", "sprint", "garden", "recipe",
)


def random_tree(rng: random.Random, max_nodes: int = 50, max_depth: int = 5) -> MemoryTree:
    """Random schema-valid tree: permissive schema, word-salad attributes."""
    schema = Schema(
        node_types=_TYPES,
        allowed_children={t: _TYPES for t in _TYPES},
        allowed_attributes={t: _ATTRS for t in _TYPES},
    )

    def make_node(index: int) -> Node:
        attrs = {}
        for name in _ATTRS:
            if rng.random() < 0.6:
                attrs[name] = " ".join(rng.choices(_WORDS, k=rng.randint(1, 3)))
        return Node(
            id=f"n{index}",
            node_type=_TYPES[0] if index == 0 else rng.choice(_TYPES),
            attributes=attrs,
            children=[],
        )

    nodes = {"n0": make_node(0)}
    depth = {"n0": 0}
    total = rng.randint(1, max_nodes)
    for index in range(1, total):
        eligible = [nid for nid in nodes if depth[nid] < max_depth - 1]
        parent = rng.choice(eligible)
        node = make_node(index)
        nodes[node.id] = node
        nodes[parent].children.append(node.id)
        depth[node.id] = depth[parent] + 1
    return MemoryTree(schema=schema, root_id="n0", nodes=nodes)


def random_condition(rng: random.Random) -> str:
    return " ".join(rng.choices(_WORDS, k=rng.randint(1, 2)))


def random_relevance(rng: random.Random, depth: int = 3):
    choices = ["local", "local"]
    if depth > 0:
        choices += ["agg", "not", "binary"]
    kind = rng.choice(choices)
    if kind == "local":
        target = WholeNode() if rng.random() < 0.5 else AttributeTarget(rng.choice(_ATTRS))
        return Local(target=target, condition=random_condition(rng))
    if kind == "agg":
        return Agg(op=rng.choice(list(AggOp)), inner=random_step(rng, depth - 1, inner=True))
    if kind == "not":
        return Not(random_relevance(rng, depth - 1))
    return Binary(
        op=rng.choice(list(BinaryOp)),
        left=random_relevance(rng, depth - 1),
        right=random_relevance(rng, depth - 1),
    )


def random_positional(rng: random.Random):
    roll = rng.random()
    if roll < 0.4:
        return Index(rng.randint(1, 4))
    if roll < 0.7:
        return FromEnd(rng.randint(1, 3))
    i = rng.randint(1, 3)
    return Range(i, i + rng.randint(0, 3))


def random_step(rng: random.Random, depth: int = 3, inner: bool = False) -> Step:
    roll = rng.random()
    if roll < 0.65:
        selector = TypeName(rng.choice(_TYPES))
    elif roll < 0.9:
        selector = Wildcard()
    else:
        selector = TypeName("Ghost")  # matches nothing, on purpose
    return Step(
        axis=rng.choice((Axis.CHILD, Axis.DESCENDANT)),
        selector=selector,
        positional=random_positional(rng) if rng.random() < 0.35 else None,
        relevance=random_relevance(rng, depth) if rng.random() < (0.55 if not inner else 0.45) else None,
    )


def random_query(rng: random.Random, max_steps: int = 3) -> Query:
    return Query(tuple(random_step(rng) for _ in range(rng.randint(0, max_steps))))


# -- planted-target instances -------------------------------------------------

_CALM_ACTIVITIES = (
    "museum tour", "harbor cruise", "taco crawl", "tide pools visit",
    "zoo morning", "old town stroll", "aquarium walkthrough", "market brunch",
)
_OUTDOOR_ACTIVITIES = (
    "outdoor kayak paddle", "outdoor cliff hike", "outdoor morning run",
    "outdoor picnic hour", "outdoor stargazing",
)

PLANTED_REQUEST = "heavy rain is forecast for day {day}, list outdoor activities planned"
PLANTED_QUERY = '/Version[1]/TripDay[{day}]/POI[node ~= "outdoor"]'


@dataclass(frozen=True)
class PlantedInstance:
    """A 7-day trip where one outdoor activity sits on the requested day and
    look-alike distractors (same node text) sit on other days."""

    tree: MemoryTree
    request_text: str
    query_text: str
    target_id: str
    distractor_ids: tuple[str, ...]

    @property
    def shared_text_distractors(self) -> int:
        return len(self.distractor_ids)


def planted_instance(rng: random.Random, target_day: int = 7) -> PlantedInstance:
    schema = Schema(
        node_types=("Trip", "Version", "TripDay", "POI"),
        allowed_children={"Trip": ("Version",), "Version": ("TripDay",), "TripDay": ("POI",), "POI": ()},
        allowed_attributes={"Trip": ("title",), "Version": ("summary",), "TripDay": ("date",), "POI": ("title", "time")},
    )
    nodes: dict[str, Node] = {
        "trip": Node("trip", "Trip", {"title": "pacific coast week"}, ["v1"]),
        "v1": Node("v1", "Version", {"summary": "initial plan"}, []),
    }
    outdoor_title = rng.choice(_OUTDOOR_ACTIVITIES)
    n_distractors = rng.randint(0, 4)
    distractor_days = rng.sample([d for d in range(1, 8) if d != target_day], k=n_distractors)

    target_id = ""
    distractors: list[str] = []
    for day in range(1, 8):
        day_id = f"day{day}"
        nodes[day_id] = Node(day_id, "TripDay", {"date": f"2026-08-{day:02d}"}, [])
        nodes["v1"].children.append(day_id)
        pois = [rng.choice(_CALM_ACTIVITIES) for _ in range(rng.randint(2, 4))]
        slot = rng.randint(0, len(pois))
        titles = pois[:slot] + ([outdoor_title] if day == target_day or day in distractor_days else []) + pois[slot:]
        for idx, title in enumerate(titles, start=1):
            poi_id = f"day{day}p{idx}"
            hour = 8 + idx
            nodes[poi_id] = Node(poi_id, "POI", {"title": title, "time": f"{hour:02d}:00"}, [])
            nodes[day_id].children.append(poi_id)
            if title == outdoor_title:
                if day == target_day:
                    target_id = poi_id
                else:
                    distractors.append(poi_id)
    tree = MemoryTree(schema=schema, root_id="trip", nodes=nodes)
    return PlantedInstance(
        tree=tree,
        request_text=PLANTED_REQUEST.format(day=target_day),
        query_text=PLANTED_QUERY.format(day=target_day),
        target_id=target_id,
        distractor_ids=tuple(distractors),
    )


def planted_session(rng: random.Random, turns: int = 8) -> tuple[dict, dict]:
    """One planted tree plus a session script querying a different day each
    turn; returns (memory document, session script) as plain dicts."""
    from .memtree import to_document

    instance = planted_instance(rng, target_day=7)
    tree = instance.tree
    days_with_outdoor = sorted(
        {
            int(tree.parent(nid)[3:])
            for nid in tree.document_order()
            if tree.nodes[nid].node_type == "POI" and "outdoor" in tree.node_text(nid)
        }
    )
    script_turns = []
    for turn in range(turns):
        day = days_with_outdoor[turn % len(days_with_outdoor)]
        day_pois = [
            nid for nid in tree.children(f"day{day}")
            if "outdoor" in tree.node_text(nid)
        ]
        script_turns.append(
            {
                "request": PLANTED_REQUEST.format(day=day),
                "query": PLANTED_QUERY.format(day=day),
                "target": day_pois[0],
            }
        )
    return to_document(tree), {"turns": script_turns}
