"""Brute-force reference evaluator.

Recomputes query semantics by direct set comprehension over all nodes at
every step, deriving its own parent links, ancestor chains and document
order from the raw node table.  It shares nothing with the production
evaluator beyond the AST/tree types and the atomic scorers, so agreement
between the two is meaningful evidence of correctness.
"""

from __future__ import annotations

import math

from .executor import WeightedNodeSet
from .memtree import MemoryTree
from .query import (
    Agg,
    AggOp,
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
    Wildcard,
)
from .scorers import as_scorer, atom


def reference_evaluate(tree: MemoryTree, query: Query, scorer) -> WeightedNodeSet:
    scorer = as_scorer(scorer)
    nodes = tree.nodes
    parent = {child: node.id for node in nodes.values() for child in node.children}

    def preorder(nid: str):
        yield nid
        for child in nodes[nid].children:
            yield from preorder(child)

    doc = list(preorder(tree.root_id))
    position = {nid: k for k, nid in enumerate(doc)}

    def ancestors(nid: str):
        while nid in parent:
            nid = parent[nid]
            yield nid

    def select_positions(ordered: list[str], positional) -> list[str]:
        count = len(ordered)
        if isinstance(positional, Index):
            return [ordered[positional.i - 1]] if positional.i <= count else []
        if isinstance(positional, FromEnd):
            return [ordered[count - positional.i]] if positional.i <= count else []
        if isinstance(positional, Range):
            return [ordered[k] for k in range(positional.i - 1, min(positional.j, count))]
        raise TypeError(f"unknown positional {positional!r}")

    def structural(nid: str, inner: Step) -> list[str]:
        if inner.axis is Axis.CHILD:
            pool = [u for u in doc if parent.get(u) == nid]
        else:
            pool = [u for u in doc if nid in set(ancestors(u))]
        if isinstance(inner.selector, TypeName):
            pool = [u for u in pool if nodes[u].node_type == inner.selector.name]
        if inner.positional is not None:
            pool = select_positions(pool, inner.positional)
        return pool

    def relevance(nid: str, expr) -> float:
        if isinstance(expr, Local):
            return atom(scorer, tree, nid, expr.target, expr.condition)
        if isinstance(expr, Agg):
            evidence = structural(nid, expr.inner)
            if expr.inner.relevance is None:
                scores = [1.0 for _ in evidence]
            else:
                scores = [relevance(u, expr.inner.relevance) for u in evidence]
            if not scores:
                return 0.0
            if expr.op is AggOp.AVG:
                return sum(scores) / len(scores)
            if expr.op is AggOp.MIN:
                return min(scores)
            if expr.op is AggOp.MAX:
                return max(scores)
            if 0.0 in scores:
                return 0.0
            return math.exp(sum(math.log(s) for s in scores) / len(scores))
        if isinstance(expr, Not):
            return 1.0 - relevance(nid, expr.expr)
        if isinstance(expr, Binary):
            left = relevance(nid, expr.left)
            right = relevance(nid, expr.right)
            if expr.op is BinaryOp.AVG:
                return (left + right) / 2.0
            if expr.op is BinaryOp.PROD:
                return left * right
            if expr.op is BinaryOp.MIN:
                return min(left, right)
            return max(left, right)
        raise TypeError(f"unknown relevance expression {expr!r}")

    weights = {tree.root_id: 1.0}
    for step in query.steps:
        if step.axis is Axis.CHILD:
            weights = {u: weights[parent[u]] for u in doc if parent.get(u) in weights}
        else:
            reached = {}
            for u in doc:
                inherited = [weights[a] for a in ancestors(u) if a in weights]
                if inherited:
                    reached[u] = max(inherited)
            weights = reached
        if isinstance(step.selector, TypeName):
            weights = {u: w for u, w in weights.items() if nodes[u].node_type == step.selector.name}
        elif not isinstance(step.selector, Wildcard):
            raise TypeError(f"unknown selector {step.selector!r}")
        if step.positional is not None:
            ordered = sorted(weights, key=position.__getitem__)
            weights = {u: weights[u] for u in select_positions(ordered, step.positional)}
        if step.relevance is not None:
            weights = {u: w * relevance(u, step.relevance) for u, w in weights.items()}
    ordered = sorted(weights, key=position.__getitem__)
    return WeightedNodeSet(tuple((u, weights[u]) for u in ordered))
