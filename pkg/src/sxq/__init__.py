"""Structure-aware retrieval and versioned updates for tree-shaped
conversational memory.

The pieces compose bottom-up: memory trees (:mod:`sxq.memtree`) hold the
data, the query language (:mod:`sxq.query`) describes what to fetch,
scorers (:mod:`sxq.scorers`) grade semantic conditions, and the executor
(:mod:`sxq.executor`) threads weighted node sets through query steps.
:mod:`sxq.baseline` is the flat-retrieval comparison point and
:mod:`sxq.service` / :mod:`sxq.cli` expose everything over HTTP and the
command line.
"""

from .baseline import FlatItem, flat_retrieve, flatten
from .errors import (
    MemoryParseError,
    MutationError,
    QuerySyntaxError,
    SchemaViolationError,
    ScorerError,
    ServiceResponseError,
    SxqError,
    TransportError,
    UnknownNodeError,
    Violation,
)
from .executor import (
    ExecutionTrace,
    RankedResults,
    StepTrace,
    WeightedNodeSet,
    eval_axis,
    eval_node_selector,
    eval_positional,
    eval_relevance,
    eval_step,
    evaluate,
    rank,
    rel,
    trace_to_json,
)
from .memtree import (
    DeleteEdit,
    InsertEdit,
    MemoryTree,
    NoEdit,
    Node,
    Schema,
    SubtreeSerialization,
    count_tokens,
    dump_memory,
    insert_version,
    load_memory,
    load_memory_file,
    parse_edit,
    to_document,
)
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
    parse,
    render,
)
from .reference import reference_evaluate
from .scorers import (
    EmbeddingScorer,
    EntailmentScorer,
    LexicalScorer,
    ScorerSpec,
    atom,
    embedding_score,
    entailment_score,
    lexical_score,
    make_scorer,
    spec_from_env,
    tokenize,
)

__version__ = "0.1.0"
