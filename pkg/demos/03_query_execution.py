"""Execute the worked conference-trip queries and inspect the trace.

The first half uses the deterministic lexical scorer. The second half
spins up the replay scoring service shipped with the repo and reruns the
same query with recorded embedding vectors, reproducing the published
day-level score of 0.565.

Run from anywhere:  python demos/03_query_execution.py
"""

from pathlib import Path

from sxq import ScorerSpec, evaluate, load_memory_file, parse, rank
from sxq.replay import ReplayScorerServer, load_replay

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

tree = load_memory_file(FIXTURES / "acl_trip.json")
lexical = ScorerSpec()

# "add a coffee break on the day packed with conference sessions":
# score each Day by the average conference-relatedness of its child POIs.
q1 = parse('//Day[ avg(/POI[ node ~= "conference" ]) ]')
weighted, trace = evaluate(tree, q1, lexical)
print("Q1 with the lexical scorer")
for nid, weight in rank(weighted).entries:
    print(f"  {nid}: {weight:.3f}  ({tree.node_text(nid)})")
print()

# The trace records, per step, the input/output weighted sets and every
# relevance sub-score, one entry per (node, sub-expression) pair.
step = trace.steps[0]
print(f"step 0: {step.rendered_step}")
print(f"  input  {step.input_set.entries}")
print(f"  output {[(n, round(w, 3)) for n, w in step.output_set.entries]}")
print("  sub-scores:")
for nid, expr, score in step.relevance_details:
    print(f"    {nid:6} {score:.3f}  {expr}")
print()

# "on the third day, remove all activities except the workshop":
# positional selection, then an inverted local condition.
q2 = parse('//Day[3]/POI[1 - [node ~= "workshop"]]')
weighted, _ = evaluate(tree, q2, lexical)
print("Q2 scores every third-day POI; the workshop drops to zero")
for nid, weight in weighted.entries:
    print(f"  {nid}: {weight:.1f}  ({tree.node_text(nid)})")
print()

# Same query, recorded embedding cosines instead of token overlap.
replay = load_replay(FIXTURES / "scorer_replays" / "acl_trip_embeddings.json")
with ReplayScorerServer(embeddings=replay) as server:
    spec = ScorerSpec(kind="embedding", endpoint=server.url, model_name="replay-embed")
    weighted, trace = evaluate(tree, q1, spec)
    print("Q1 with replayed embedding scores")
    for nid, weight in rank(weighted).entries:
        print(f"  {nid}: {weight:.4f}")
    print("  day-2 POI sub-scores:",
          [round(s, 3) for n, _, s in trace.steps[0].relevance_details if n.startswith("d2p")])
