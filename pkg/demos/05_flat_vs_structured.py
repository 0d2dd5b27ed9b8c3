"""Why structure matters: planted-target retrieval, flat vs query-based.

Each synthetic instance is a seven-day trip with one outdoor activity on
day 7 (the target) and zero to four copies of the same activity text on
other days. A flat retriever sees identical items and falls back to
document order; the positional query pins the right day first.

Run from anywhere:  python demos/05_flat_vs_structured.py
"""

import random

from sxq import ScorerSpec, evaluate, flat_retrieve, flatten, parse, rank
from sxq.synthetic import planted_instance

lexical = ScorerSpec()
rng = random.Random(42)

# One instance in detail.
inst = planted_instance(rng)
print("request:   ", inst.request_text)
print("query:     ", inst.query_text)
print("target:    ", inst.target_id, "=", inst.tree.node_text(inst.target_id))
print("distractors:", list(inst.distractor_ids) or "none")

flat_top = flat_retrieve(flatten(inst.tree), inst.request_text, 3, lexical)
print("flat top-3:", [(nid, round(s, 3)) for nid, s in flat_top])

weighted, _ = evaluate(inst.tree, parse(inst.query_text), lexical)
print("query top: ", rank(weighted).top_id)
print()

# Hit rates over a batch.
hits = {"flat": 0, "sxq": 0}
crowded = {"flat": 0, "sxq": 0, "n": 0}
for _ in range(50):
    inst = planted_instance(rng)
    flat_first = flat_retrieve(flatten(inst.tree), inst.request_text, 1, lexical)[0][0]
    weighted, _ = evaluate(inst.tree, parse(inst.query_text), lexical)
    sxq_first = rank(weighted).top_id
    hits["flat"] += flat_first == inst.target_id
    hits["sxq"] += sxq_first == inst.target_id
    if inst.shared_text_distractors >= 2:
        crowded["n"] += 1
        crowded["flat"] += flat_first == inst.target_id
        crowded["sxq"] += sxq_first == inst.target_id

print(f"top-1 hits over 50 instances: query {hits['sxq']}/50, flat {hits['flat']}/50")
print(f"with >=2 identical distractors ({crowded['n']} instances): "
      f"query {crowded['sxq']}, flat {crowded['flat']}")
