"""Flat retrieval baseline.

Flattens the tree into one independent text item per node and retrieves
top-k by atomic relevance against the raw request text.  Items carry no
ancestor context in their scored text; losing the hierarchy is exactly
what this baseline is for, so gaps against structured retrieval are
attributable to structure, not to the scorer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .memtree import MemoryTree
from .scorers import as_scorer


@dataclass(frozen=True)
class FlatItem:
    node_id: str
    text: str
    path_text: str  # ancestors, for display only, never scored


def flatten(tree: MemoryTree) -> list[FlatItem]:
    """One item per node, in document order."""
    items = []
    for nid in tree.document_order():
        ancestors = tree.path_to(nid)[:-1]
        items.append(
            FlatItem(
                node_id=nid,
                text=tree.node_text(nid),
                path_text=" / ".join(tree.node_text(a) for a in ancestors),
            )
        )
    return items


def flat_retrieve(items: list[FlatItem], request_text: str, k: int, scorer) -> list[tuple[str, float]]:
    """Top-k items by score against the request, ties in document order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scorer = as_scorer(scorer)
    scored = [(item.node_id, scorer.score(item.text, request_text)) for item in items]
    scored.sort(key=lambda pair: -pair[1])  # stable: equal scores keep document order
    return scored[:k]
