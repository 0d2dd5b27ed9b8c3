"""Tour of the query surface syntax: parsing, ASTs, rendering, errors.

Run from anywhere:  python demos/02_query_language.py
"""

from sxq import QuerySyntaxError, parse, render

EXAMPLES = [
    # the two workhorse shapes: aggregation scoring and positional + negation
    '//Day[ avg(/POI[ node ~= "conference" ]) ]',
    '//Day[3]/POI[1 - [node ~= "workshop"]]',
    # positional selectors are 1-based; [-1] counts from the end
    "/Version[-1]/Day[2]",
    "//POI[2:4]",
    # relevance expressions compose: product, averaged pair, min/max
    '//Day[[label ~= "Day 2"] * [date ~= "2026"]]',
    '//Day[([label ~= "Day 2"] + [date ~= "2026"])/2]',
    '//Day[min(avg(/POI[node ~= "conference"]), [label ~= "Day"])]',
    # wildcard selector and whole-node conditions
    '//*[node ~= "poster session"]',
]

for text in EXAMPLES:
    ast = parse(text)
    canonical = render(ast)
    assert parse(canonical) == ast  # render/parse are exact inverses
    print(f"input:     {text}")
    print(f"canonical: {canonical}")
    print(f"steps:     {len(ast.steps)}")
    print()

# Parse errors point at the failure as a 0-based byte offset and list the
# token kinds that would have been accepted there.
for bad in ["Day", "//Day[", '//Day[2 - [node ~= "x"]]']:
    try:
        parse(bad)
    except QuerySyntaxError as err:
        caret = " " * err.offset + "^"
        print(f"{bad}\n{caret}")
        print(f"  {err}")
        print()
