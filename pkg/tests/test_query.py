from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sxq.errors import QuerySyntaxError
from sxq.query import (
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
    parse,
    render,
    render_step,
)
from sxq.synthetic import random_query

Q1 = '//Day[ avg(/POI[ node ~= "conference" ]) ]'
Q2 = '//Day[3]/POI[1 - [node ~= "workshop"]]'


def test_parse_q1():
    ast = parse(Q1)
    assert ast == Query((
        Step(
            axis=Axis.DESCENDANT,
            selector=TypeName("Day"),
            relevance=Agg(
                op=AggOp.AVG,
                inner=Step(axis=Axis.CHILD, selector=TypeName("POI"),
                           relevance=Local(WholeNode(), "conference")),
            ),
        ),
    ))


def test_parse_q2():
    ast = parse(Q2)
    assert len(ast.steps) == 2
    first, second = ast.steps
    assert first.positional == Index(3)
    assert second.relevance == Not(Local(WholeNode(), "workshop"))


def test_parse_empty_and_blank():
    assert parse("") == Query(())
    assert parse("   \t\n ") == Query(())
    assert render(Query(())) == ""


def test_parse_product_of_locals():
    ast = parse('//Day[[title ~= "x"] * [title ~= "y"]]')
    assert ast.steps[0].relevance == Binary(
        BinaryOp.PROD, Local(AttributeTarget("title"), "x"), Local(AttributeTarget("title"), "y")
    )


def test_inner_step_axis_defaults_to_child():
    assert parse('//Day[ avg( POI[ node ~= "conference" ] ) ]') == parse(Q1)


def test_min_max_lookahead():
    binary = parse('//Day[min([a ~= "x"], [b ~= "y"])]').steps[0].relevance
    assert binary == Binary(BinaryOp.MIN, Local(AttributeTarget("a"), "x"), Local(AttributeTarget("b"), "y"))
    agg = parse("//Day[max(POI[2])]").steps[0].relevance
    assert agg == Agg(AggOp.MAX, Step(Axis.CHILD, TypeName("POI"), positional=Index(2)))
    nested = parse('//Day[min(avg(/POI), [a ~= "b"])]').steps[0].relevance
    assert isinstance(nested, Binary) and isinstance(nested.left, Agg)


def test_binary_average_form():
    ast = parse('//Day[([a ~= "x"] + [b ~= "y"])/2]')
    assert ast.steps[0].relevance == Binary(
        BinaryOp.AVG, Local(AttributeTarget("a"), "x"), Local(AttributeTarget("b"), "y")
    )


def test_positional_forms():
    assert parse("/Day[1]").steps[0].positional == Index(1)
    assert parse("/Day[-2]").steps[0].positional == FromEnd(2)
    assert parse("/Day[2:5]").steps[0].positional == Range(2, 5)


def test_render_q1_is_fixed_point():
    ast = parse(Q1)
    assert parse(render(ast)) == ast


def test_render_negation_canonical_form():
    step = Step(Axis.CHILD, TypeName("POI"), relevance=Not(Local(WholeNode(), "workshop")))
    assert render_step(step) == '/POI[1 - [node ~= "workshop"]]'


def test_render_escapes_strings():
    local = Local(WholeNode(), 'say "hi" \\ bye')
    text = render(Query((Step(Axis.CHILD, TypeName("A"), relevance=local),)))
    assert parse(text).steps[0].relevance == local


def test_precedence_unary_before_product():
    ast = parse('/A[1 - [x ~= "a"] * [y ~= "b"]]')
    assert ast.steps[0].relevance == Binary(
        BinaryOp.PROD,
        Not(Local(AttributeTarget("x"), "a")),
        Local(AttributeTarget("y"), "b"),
    )
    grouped = parse('/A[1 - ([x ~= "a"] * [y ~= "b"])]')
    assert isinstance(grouped.steps[0].relevance, Not)


def test_double_bracket_local_equals_single():
    assert parse('/POI[[node ~= "x"]]') == parse('/POI[node ~= "x"]')


@pytest.mark.parametrize(
    "bad, offset",
    [
        ("Day", 0),
        ("//Day[", 6),
        ("//Day[0]", 6),
        ("/Day[3:1]", 7),
        ('//Day[2 - [a ~= "b"]]', 6),
        ('//Day[node ~= "x"', 17),
        ('//Day[node ~= ""]', 14),
        ('//Day[node ~= "x]', 14),
        ("//*junk", 3),
        ("//Day@", 5),
        ("/A[min(avg)]", 10),
        ('/A[([x ~= "y"] + [z ~= "w"])/3]', 29),
    ],
)
def test_syntax_errors_carry_byte_offsets(bad, offset):
    with pytest.raises(QuerySyntaxError) as err:
        parse(bad)
    assert err.value.offset == offset


def test_byte_offset_counts_utf8_bytes():
    # é inside the string is two bytes; the stray bracket lands after it
    bad = '/A[x ~= "café"]]'
    with pytest.raises(QuerySyntaxError) as err:
        parse(bad)
    assert err.value.offset == len('/A[x ~= "café"]'.encode("utf-8"))


def test_avg_argument_is_always_a_step():
    # aggregator names stay usable as type names under avg/gmean
    ast = parse("/A[avg(avg)]")
    assert ast.steps[0].relevance == Agg(AggOp.AVG, Step(Axis.CHILD, TypeName("avg")))


def test_positional_must_precede_relevance():
    with pytest.raises(QuerySyntaxError):
        parse('/Day[node ~= "x"][2]')
    with pytest.raises(QuerySyntaxError):
        parse("/Day[1][2]")


@given(st.text(max_size=40))
@settings(max_examples=300, deadline=None)
def test_parser_totality(text):
    try:
        parse(text)
    except QuerySyntaxError as err:
        assert 0 <= err.offset <= len(text.encode("utf-8"))


def test_adversarial_nesting_is_a_syntax_error_not_a_crash():
    deep_negation = "/A[" + "1 - " * 50_000 + '[x ~= "y"]]'
    with pytest.raises(QuerySyntaxError, match="nested deeper"):
        parse(deep_negation)
    deep_parens = "/A[" + "(" * 50_000 + '[x ~= "y"]' + ")" * 50_000 + "]"
    with pytest.raises(QuerySyntaxError, match="nested deeper"):
        parse(deep_parens)
    deep_aggs = "/A[" + "min(" * 50_000
    with pytest.raises(QuerySyntaxError, match="nested deeper"):
        parse(deep_aggs)
    # moderate nesting still parses fine
    moderate = "/A[" + "1 - " * 60 + '[x ~= "y"]]'
    expr = parse(moderate).steps[0].relevance
    for _ in range(60):
        assert isinstance(expr, Not)
        expr = expr.expr
    assert expr == Local(AttributeTarget("x"), "y")


@given(st.text(min_size=1, max_size=30))
@settings(max_examples=200, deadline=None)
def test_condition_string_roundtrip(condition):
    ast = Query((Step(Axis.CHILD, TypeName("A"), relevance=Local(WholeNode(), condition)),))
    assert parse(render(ast)) == ast


def test_random_ast_roundtrip():
    rng = random.Random(20260810)
    for _ in range(400):
        ast = random_query(rng)
        rendered = render(ast)
        assert parse(rendered) == ast, rendered


PRODUCTION_COVERAGE = [
    "",                                        # Q = empty
    "/Itinerary",                              # Q = S, axis /, selector type
    "//Version/Day",                           # Q = S Q', axis //
    "/*",                                      # wildcard selector
    "/Day[1]",                                 # R = [i]
    "/Day[-1]",                                # R = [-i]
    "/Day[1:2]",                               # R = [i:j]
    '/POI[node ~= "s"]',                       # Local on the whole node
    '/POI[title ~= "s"]',                      # Local on an attribute
    '/Day[1 - [node ~= "s"]]',                 # 1 - P
    '/Day[[a ~= "x"] * [b ~= "y"]]',           # P * P
    '/Day[([a ~= "x"] + [b ~= "y"])/2]',       # (P + P)/2
    '/Day[min([a ~= "x"], [b ~= "y"])]',       # min(P, P)
    '/Day[max([a ~= "x"], [b ~= "y"])]',       # max(P, P)
    "/Day[avg(POI)]",                          # Agg avg
    "/Day[min(/POI)]",                         # Agg min
    "/Day[max(//POI)]",                        # Agg max
    '/Day[gmean(POI[1:2][node ~= "s"])]',      # Agg gmean, inner R and P
]


def test_grammar_production_coverage():
    for text in PRODUCTION_COVERAGE:
        ast = parse(text)
        assert parse(render(ast)) == ast
