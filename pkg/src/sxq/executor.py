"""Query evaluation over memory trees.

Evaluation threads a weighted node set through the query's steps: the
axis expands it, the node selector filters it, the positional selector
slices it in document order, and the relevance expression multiplies
each weight by that node's graded score.  Weights start at 1 on the root
and only ever shrink, so the final weights rank how well each node
matches the whole query.

Every step is also recorded in an :class:`ExecutionTrace` carrying the
input/output sets and each relevance sub-score, which is what the
execution view of the workbench displays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .memtree import MemoryTree
from .query import (
    Agg,
    AggOp,
    Axis,
    Binary,
    BinaryOp,
    Local,
    Index,
    FromEnd,
    Not,
    Positional,
    Query,
    RelevanceExpr,
    Selector,
    Step,
    TypeName,
    render_relevance,
    render_step,
)
from .scorers import Scorer, as_scorer, atom


@dataclass(frozen=True)
class WeightedNodeSet:
    """(node id, weight) pairs in document order, one entry per node."""

    entries: tuple[tuple[str, float], ...] = ()

    def ids(self) -> list[str]:
        return [nid for nid, _ in self.entries]

    def weight_of(self, node_id: str) -> Optional[float]:
        for nid, w in self.entries:
            if nid == node_id:
                return w
        return None

    def __len__(self) -> int:
        return len(self.entries)


def _from_weights(tree: MemoryTree, weights: dict[str, float]) -> WeightedNodeSet:
    ordered = sorted(weights, key=tree.order_index)
    return WeightedNodeSet(tuple((nid, weights[nid]) for nid in ordered))


def initial_set(tree: MemoryTree) -> WeightedNodeSet:
    return WeightedNodeSet(((tree.root_id, 1.0),))


# One relevance sub-score: (node id, rendered sub-expression, score).
RelevanceDetail = tuple[str, str, float]


@dataclass
class StepTrace:
    step_index: int
    rendered_step: str
    input_set: WeightedNodeSet
    output_set: WeightedNodeSet
    relevance_details: list[RelevanceDetail] = field(default_factory=list)


@dataclass
class ExecutionTrace:
    steps: list[StepTrace] = field(default_factory=list)


def trace_to_json(trace: ExecutionTrace) -> dict:
    """Wire shape consumed by the service and the workbench."""
    return {
        "steps": [
            {
                "index": st.step_index,
                "step": st.rendered_step,
                "input": [[nid, w] for nid, w in st.input_set.entries],
                "output": [[nid, w] for nid, w in st.output_set.entries],
                "relevance": [[nid, expr, score] for nid, expr, score in st.relevance_details],
            }
            for st in trace.steps
        ]
    }


@dataclass(frozen=True)
class RankedResults:
    """Entries sorted by descending weight; ties keep document order."""

    entries: tuple[tuple[str, float], ...]

    @property
    def top_id(self) -> Optional[str]:
        return self.entries[0][0] if self.entries else None


def rank(weighted: WeightedNodeSet) -> RankedResults:
    ordered = sorted(weighted.entries, key=lambda e: -e[1])  # stable: ties stay in doc order
    return RankedResults(tuple(ordered))


# -- step components ----------------------------------------------------------


def eval_axis(tree: MemoryTree, axis: Axis, weighted: WeightedNodeSet) -> WeightedNodeSet:
    expand = tree.children if axis is Axis.CHILD else tree.descendants
    weights: dict[str, float] = {}
    for nid, w in weighted.entries:
        for reached in expand(nid):
            # a node reachable from several weighted ancestors keeps the
            # largest weight, so each node ranks once
            if w > weights.get(reached, -1.0):
                weights[reached] = w
    return _from_weights(tree, weights)


def eval_node_selector(tree: MemoryTree, selector: Selector, weighted: WeightedNodeSet) -> WeightedNodeSet:
    if isinstance(selector, TypeName):
        wanted = selector.name
        return WeightedNodeSet(
            tuple((nid, w) for nid, w in weighted.entries if tree.nodes[nid].node_type == wanted)
        )
    return weighted


def eval_positional(tree: MemoryTree, positional: Positional, weighted: WeightedNodeSet) -> WeightedNodeSet:
    entries = weighted.entries
    n = len(entries)
    if isinstance(positional, Index):
        picked = entries[positional.i - 1 : positional.i] if positional.i <= n else ()
    elif isinstance(positional, FromEnd):
        picked = entries[n - positional.i : n - positional.i + 1] if positional.i <= n else ()
    else:
        picked = entries[positional.i - 1 : min(positional.j, n)]
    return WeightedNodeSet(tuple(picked))


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


def _aggregate(op: AggOp, scores: list[float]) -> float:
    if not scores:
        return 0.0
    if op is AggOp.AVG:
        value = sum(scores) / len(scores)
    elif op is AggOp.MIN:
        value = min(scores)
    elif op is AggOp.MAX:
        value = max(scores)
    else:  # geometric mean; any zero evidence zeroes it outright
        if any(s == 0.0 for s in scores):
            return 0.0
        value = math.exp(sum(math.log(s) for s in scores) / len(scores))
    return _clamp(value)


def rel(tree: MemoryTree, node_id: str, expr: RelevanceExpr, scorer: Scorer,
        details: Optional[list[RelevanceDetail]] = None) -> float:
    """Graded relevance of one node under a relevance expression.

    When details is given, every sub-expression evaluation appends
    (node, rendered expression, score), innermost first.
    """
    if isinstance(expr, Local):
        score = atom(scorer, tree, node_id, expr.target, expr.condition)
    elif isinstance(expr, Agg):
        evidence = evidence_set(tree, node_id, expr.inner)
        if expr.inner.relevance is None:
            scores = [1.0] * len(evidence)
        else:
            scores = [rel(tree, ev, expr.inner.relevance, scorer, details) for ev in evidence]
        score = _aggregate(expr.op, scores)
    elif isinstance(expr, Not):
        score = _clamp(1.0 - rel(tree, node_id, expr.expr, scorer, details))
    elif isinstance(expr, Binary):
        left = rel(tree, node_id, expr.left, scorer, details)
        right = rel(tree, node_id, expr.right, scorer, details)
        if expr.op is BinaryOp.AVG:
            score = (left + right) / 2.0
        elif expr.op is BinaryOp.PROD:
            score = left * right
        elif expr.op is BinaryOp.MIN:
            score = min(left, right)
        else:
            score = max(left, right)
        score = _clamp(score)
    else:
        raise TypeError(f"unknown relevance expression {expr!r}")
    if details is not None:
        details.append((node_id, render_relevance(expr), score))
    return score


def evidence_set(tree: MemoryTree, node_id: str, inner: Step) -> list[str]:
    """Structural execution of an aggregation's inner step from one node:
    axis, selector and positional apply; the inner relevance does not."""
    weighted = WeightedNodeSet(((node_id, 1.0),))
    weighted = eval_axis(tree, inner.axis, weighted)
    weighted = eval_node_selector(tree, inner.selector, weighted)
    if inner.positional is not None:
        weighted = eval_positional(tree, inner.positional, weighted)
    return weighted.ids()


def eval_relevance(tree: MemoryTree, expr: RelevanceExpr, weighted: WeightedNodeSet,
                   scorer: Scorer, details: Optional[list[RelevanceDetail]] = None) -> WeightedNodeSet:
    # zero-weight entries are kept: downstream consumers want the full
    # scored candidate list, and ranking sinks them anyway
    return WeightedNodeSet(
        tuple((nid, w * rel(tree, nid, expr, scorer, details)) for nid, w in weighted.entries)
    )


def eval_step(tree: MemoryTree, step: Step, weighted: WeightedNodeSet, scorer: Scorer,
              details: Optional[list[RelevanceDetail]] = None) -> WeightedNodeSet:
    weighted = eval_axis(tree, step.axis, weighted)
    weighted = eval_node_selector(tree, step.selector, weighted)
    if step.positional is not None:
        weighted = eval_positional(tree, step.positional, weighted)
    if step.relevance is not None:
        weighted = eval_relevance(tree, step.relevance, weighted, scorer, details)
    return weighted


def evaluate(tree: MemoryTree, query: Query, scorer) -> tuple[WeightedNodeSet, ExecutionTrace]:
    """Run a query from {(root, 1)} and record a per-step trace.

    scorer may be a ScorerSpec or a scorer instance.  Unknown type names
    simply match nothing; only scorer failures raise.
    """
    scorer = as_scorer(scorer)
    weighted = initial_set(tree)
    trace = ExecutionTrace()
    for index, step in enumerate(query.steps):
        details: list[RelevanceDetail] = []
        output = eval_step(tree, step, weighted, scorer, details)
        trace.steps.append(
            StepTrace(
                step_index=index,
                rendered_step=render_step(step),
                input_set=weighted,
                output_set=output,
                relevance_details=details,
            )
        )
        weighted = output
    return weighted, trace
