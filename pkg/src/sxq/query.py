"""Query language for memory trees: AST, parser, and pretty-printer.

A query is a sequence of steps.  Each step navigates an axis (``/`` for
children, ``//`` for descendants), filters by node type or ``*``, and may
carry a 1-based positional selector plus a relevance expression that
grades the surviving nodes in [0, 1].

The full surface syntax lives in docs/grammar.md.  ``parse`` and
``render`` are exact inverses on ASTs: ``parse(render(ast)) == ast``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import QuerySyntaxError


class Axis(enum.Enum):
    CHILD = "/"
    DESCENDANT = "//"


class AggOp(enum.Enum):
    AVG = "avg"
    MIN = "min"
    MAX = "max"
    GMEAN = "gmean"


class BinaryOp(enum.Enum):
    AVG = "avg"
    PROD = "prod"
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class TypeName:
    name: str


@dataclass(frozen=True)
class Wildcard:
    pass


Selector = Union[TypeName, Wildcard]


@dataclass(frozen=True)
class Index:
    i: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("positional index must be >= 1")


@dataclass(frozen=True)
class FromEnd:
    i: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("from-end index must be >= 1")


@dataclass(frozen=True)
class Range:
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.i > self.j:
            raise ValueError("range needs 1 <= i <= j")


Positional = Union[Index, FromEnd, Range]


@dataclass(frozen=True)
class AttributeTarget:
    name: str


@dataclass(frozen=True)
class WholeNode:
    pass


@dataclass(frozen=True)
class Local:
    """Atomic relevance: score one attribute (or the whole node) vs a condition."""

    target: Union[AttributeTarget, WholeNode]
    condition: str

    def __post_init__(self):
        if self.condition == "":
            raise ValueError("relevance condition must be non-empty")


@dataclass(frozen=True)
class Agg:
    """Relevance via evidence: run inner step from the node, aggregate its scores."""

    op: AggOp
    inner: "Step"


@dataclass(frozen=True)
class Not:
    expr: "RelevanceExpr"


@dataclass(frozen=True)
class Binary:
    op: BinaryOp
    left: "RelevanceExpr"
    right: "RelevanceExpr"


RelevanceExpr = Union[Local, Agg, Not, Binary]


@dataclass(frozen=True)
class Step:
    axis: Axis
    selector: Selector
    positional: Optional[Positional] = None
    relevance: Optional[RelevanceExpr] = None


@dataclass(frozen=True)
class Query:
    steps: tuple[Step, ...] = ()


# -- lexer ------------------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")

# Aggregator names are reserved inside relevance expressions; other spots
# (step selectors, attribute names before ~=) accept them as identifiers.
RESERVED_AGG = {"avg", "min", "max", "gmean"}

# nesting cap keeps the recursive-descent parser total on adversarial input
MAX_RELEVANCE_DEPTH = 100


@dataclass(frozen=True)
class _Token:
    kind: str  # one of: / // * [ ] ( ) : , + - ~= int ident string end
    value: object
    pos: int  # character offset into the query text


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("//", i):
            tokens.append(_Token("//", "//", i))
            i += 2
            continue
        if ch in "/*[]():,+-":
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        if text.startswith("~=", i):
            tokens.append(_Token("~=", "~=", i))
            i += 2
            continue
        if ch == '"':
            value, i_next = _lex_string(text, i)
            tokens.append(_Token("string", value, i))
            i = i_next
            continue
        m = _INT_RE.match(text, i)
        if m:
            tokens.append(_Token("int", int(m.group()), i))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", _byte_offset(text, i))
    tokens.append(_Token("end", None, n))
    return tokens


def _lex_string(text: str, start: int) -> tuple[str, int]:
    # start points at the opening quote; \" and \\ are the only escapes
    out: list[str] = []
    i = start + 1
    while i < len(text):
        ch = text[i]
        if ch == '"':
            return "".join(out), i + 1
        if ch == "\\":
            if i + 1 < len(text) and text[i + 1] in ('"', "\\"):
                out.append(text[i + 1])
                i += 2
                continue
            raise QuerySyntaxError("invalid string escape", _byte_offset(text, i), ('\\"', "\\\\"))
        out.append(ch)
        i += 1
    raise QuerySyntaxError("unterminated string", _byte_offset(text, start), ('"',))


def _byte_offset(text: str, char_pos: int) -> int:
    return len(text[:char_pos].encode("utf-8"))


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.i = 0
        self.depth = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {kind!r}", (kind,))
        return self.next()

    def fail(self, message: str, expected: tuple[str, ...] = ()) -> None:
        tok = self.peek()
        raise QuerySyntaxError(message, _byte_offset(self.text, tok.pos), expected)

    # query := step* end
    def parse_query(self) -> Query:
        steps: list[Step] = []
        while self.peek().kind in ("/", "//"):
            steps.append(self.parse_step())
        if self.peek().kind != "end":
            if steps:
                self.fail("unexpected trailing input", ("/", "//", "end of input"))
            self.fail("query must start with an axis", ("/", "//", "end of input"))
        return Query(tuple(steps))

    def parse_step(self) -> Step:
        axis = Axis.CHILD if self.next().kind == "/" else Axis.DESCENDANT
        selector = self.parse_selector()
        positional, relevance = self.parse_predicates()
        return Step(axis=axis, selector=selector, positional=positional, relevance=relevance)

    def parse_selector(self) -> Selector:
        tok = self.peek()
        if tok.kind == "*":
            self.next()
            return Wildcard()
        if tok.kind == "ident":
            self.next()
            return TypeName(tok.value)
        self.fail("expected node type or *", ("node type", "*"))

    def parse_predicates(self) -> tuple[Optional[Positional], Optional[RelevanceExpr]]:
        positional: Optional[Positional] = None
        relevance: Optional[RelevanceExpr] = None
        while self.peek().kind == "[":
            if self._bracket_is_positional():
                if relevance is not None:
                    self.fail("positional selector must precede the relevance expression")
                if positional is not None:
                    self.fail("step already has a positional selector")
                positional = self.parse_positional()
            else:
                if relevance is not None:
                    self.fail("step already has a relevance expression")
                self.expect("[")
                relevance = self.parse_relevance()
                self.expect("]")
        return positional, relevance

    def _bracket_is_positional(self) -> bool:
        # after '[': '-' starts [-i]; an int followed by ']' or ':' starts
        # [i] or [i:j]; an int followed by '-' is the 1-P negation.
        first = self.peek(1)
        if first.kind == "-":
            return True
        if first.kind == "int":
            return self.peek(2).kind in ("]", ":")
        return False

    def parse_positional(self) -> Positional:
        self.expect("[")
        if self.peek().kind == "-":
            self.next()
            tok = self.expect("int")
            if tok.value < 1:
                raise QuerySyntaxError("position must be >= 1", _byte_offset(self.text, tok.pos))
            self.expect("]")
            return FromEnd(tok.value)
        tok = self.expect("int")
        if tok.value < 1:
            raise QuerySyntaxError("position must be >= 1", _byte_offset(self.text, tok.pos))
        if self.peek().kind == ":":
            self.next()
            tok2 = self.expect("int")
            if tok2.value < tok.value:
                raise QuerySyntaxError("range end must be >= range start", _byte_offset(self.text, tok2.pos))
            self.expect("]")
            return Range(tok.value, tok2.value)
        self.expect("]")
        return Index(tok.value)

    # relevance := term ('*' term)*          product, left-associative
    def parse_relevance(self) -> RelevanceExpr:
        self.depth += 1
        if self.depth > MAX_RELEVANCE_DEPTH:
            self.fail(f"relevance expression nested deeper than {MAX_RELEVANCE_DEPTH}")
        try:
            expr = self.parse_rel_term()
            while self.peek().kind == "*":
                self.next()
                expr = Binary(BinaryOp.PROD, expr, self.parse_rel_term())
            return expr
        finally:
            self.depth -= 1

    # term := ('1' '-')* primary              unary binds tighter than '*'
    def parse_rel_term(self) -> RelevanceExpr:
        negations = 0
        while self.peek().kind == "int":
            tok = self.peek()
            if tok.value != 1:
                self.fail("only '1 - expr' negation is allowed", ("1",))
            if negations >= MAX_RELEVANCE_DEPTH:
                self.fail(f"relevance expression nested deeper than {MAX_RELEVANCE_DEPTH}")
            self.next()
            self.expect("-")
            negations += 1
        expr = self.parse_rel_primary()
        for _ in range(negations):
            expr = Not(expr)
        return expr

    def parse_rel_primary(self) -> RelevanceExpr:
        tok = self.peek()
        if tok.kind == "[":
            self.next()
            local = self.parse_local()
            self.expect("]")
            return local
        if tok.kind == "ident" and self.peek(1).kind == "~=":
            # bare local, as in the single-bracket form POI[node ~= "..."]
            return self.parse_local()
        if tok.kind == "ident" and tok.value in RESERVED_AGG:
            return self.parse_agg_or_binary()
        if tok.kind == "(":
            return self.parse_paren_form()
        self.fail(
            "expected a relevance expression",
            ("[", "(", "1", "avg", "min", "max", "gmean", "attribute name"),
        )

    def parse_local(self) -> Local:
        tok = self.expect("ident")
        self.expect("~=")
        cond = self.peek()
        text = self.expect("string")
        if text.value == "":
            raise QuerySyntaxError("relevance condition must be non-empty", _byte_offset(self.text, cond.pos))
        target = WholeNode() if tok.value == "node" else AttributeTarget(tok.value)
        return Local(target=target, condition=text.value)

    def parse_agg_or_binary(self) -> RelevanceExpr:
        op_tok = self.next()
        self.expect("(")
        name = op_tok.value
        if name in ("avg", "gmean") or self._starts_step():
            inner = self.parse_inner_step()
            self.expect(")")
            return Agg(AggOp(name), inner)
        left = self.parse_relevance()
        self.expect(",")
        right = self.parse_relevance()
        self.expect(")")
        return Binary(BinaryOp(name), left, right)

    def _starts_step(self) -> bool:
        tok = self.peek()
        if tok.kind in ("/", "//", "*"):
            return True
        return tok.kind == "ident" and tok.value not in RESERVED_AGG and self.peek(1).kind != "~="

    def parse_inner_step(self) -> Step:
        # the aggregation argument; an omitted axis defaults to children
        axis = Axis.CHILD
        if self.peek().kind in ("/", "//"):
            axis = Axis.CHILD if self.next().kind == "/" else Axis.DESCENDANT
        selector = self.parse_selector()
        positional, relevance = self.parse_predicates()
        return Step(axis=axis, selector=selector, positional=positional, relevance=relevance)

    def parse_paren_form(self) -> RelevanceExpr:
        self.expect("(")
        left = self.parse_relevance()
        if self.peek().kind == "+":
            self.next()
            right = self.parse_relevance()
            self.expect(")")
            self.expect("/")
            tok = self.expect("int")
            if tok.value != 2:
                raise QuerySyntaxError("averaging divisor must be 2", _byte_offset(self.text, tok.pos), ("2",))
            return Binary(BinaryOp.AVG, left, right)
        self.expect(")")
        return left


def parse(query_text: str) -> Query:
    """Parse query text into its AST.

    Whitespace between tokens is insignificant; the empty (or blank) string
    is the empty query.  Malformed input raises QuerySyntaxError with a
    0-based byte offset and the token kinds accepted at that point.
    """
    return _Parser(query_text).parse_query()


# -- pretty-printer -----------------------------------------------------------

_PREC_PROD = 1
_PREC_UNARY = 2
_PREC_ATOM = 3


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _prec(expr: RelevanceExpr) -> int:
    if isinstance(expr, Binary) and expr.op is BinaryOp.PROD:
        return _PREC_PROD
    if isinstance(expr, Not):
        return _PREC_UNARY
    return _PREC_ATOM


def render_relevance(expr: RelevanceExpr, min_prec: int = 0) -> str:
    if isinstance(expr, Local):
        name = "node" if isinstance(expr.target, WholeNode) else expr.target.name
        return f"[{name} ~= {_quote(expr.condition)}]"
    if isinstance(expr, Agg):
        return f"{expr.op.value}({render_step(expr.inner)})"
    if isinstance(expr, Not):
        body = f"1 - {render_relevance(expr.expr, _PREC_UNARY)}"
    elif expr.op is BinaryOp.PROD:
        body = f"{render_relevance(expr.left, _PREC_PROD)} * {render_relevance(expr.right, _PREC_UNARY)}"
    elif expr.op is BinaryOp.AVG:
        return f"({render_relevance(expr.left)} + {render_relevance(expr.right)})/2"
    else:
        return f"{expr.op.value}({render_relevance(expr.left)}, {render_relevance(expr.right)})"
    if _prec(expr) < min_prec:
        return f"({body})"
    return body


def render_step(step: Step) -> str:
    out = step.axis.value
    out += "*" if isinstance(step.selector, Wildcard) else step.selector.name
    if step.positional is not None:
        if isinstance(step.positional, Index):
            out += f"[{step.positional.i}]"
        elif isinstance(step.positional, FromEnd):
            out += f"[-{step.positional.i}]"
        else:
            out += f"[{step.positional.i}:{step.positional.j}]"
    if step.relevance is not None:
        if isinstance(step.relevance, Local):
            # canonical single-bracket form: POI[node ~= "..."]
            out += render_relevance(step.relevance)
        else:
            out += f"[{render_relevance(step.relevance)}]"
    return out


def render(ast: Query) -> str:
    """Canonical text for an AST; parse(render(ast)) == ast."""
    return "".join(render_step(s) for s in ast.steps)
